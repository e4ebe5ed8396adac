#include "mcsl/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mcsl {

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string metadata_line(const OutputMetadata& meta) {
    return "# seed=" + std::to_string(meta.seed) + ", version=" + meta.version +
           ", config_hash=" + meta.config_hash + "\n";
}

std::string svg_metadata_comment(const OutputMetadata& meta) {
    return "<!-- seed=" + std::to_string(meta.seed) + ", version=" + meta.version +
           ", config_hash=" + meta.config_hash + " -->\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw io_error("write failed: " + path);
}

std::string convergence_csv(const ConvergenceTable& table, const OutputMetadata& meta) {
    std::string text = metadata_line(meta);
    text += "n,N,mean_sq_error,std_error,runtime_seconds\n";
    for (const auto& row : table.rows) {
        text += std::to_string(row.n) + "," + std::to_string(row.n_mc) + "," +
                format_double(row.mean_sq_error) + "," + format_double(row.std_error) +
                "," + format_double(row.runtime_seconds) + "\n";
    }
    return text;
}

std::string slopes_csv(const ConvergenceTable& table, const OutputMetadata& meta) {
    std::string text = metadata_line(meta);
    text += "N,slope,intercept,residual\n";
    for (const auto& fit : table.slopes) {
        text += std::to_string(fit.n_mc) + "," + format_double(fit.slope) + "," +
                format_double(fit.intercept) + "," + format_double(fit.residual) + "\n";
    }
    return text;
}

std::string heat_snapshot_csv(const GridFunction1D& state, double t, double nu,
                              WavePhase phase, int mode, const OutputMetadata& meta) {
    std::string text = metadata_line(meta);
    text += "x,u_numeric,u_exact,abs_error\n";
    for (Eigen::Index j = 0; j < state.grid.m_s; ++j) {
        const double x = state.grid.node(j);
        const double exact = exact_heat(t, x, nu, mode, phase);
        text += format_double(x) + "," + format_double(state.values[j]) + "," +
                format_double(exact) + "," +
                format_double(std::abs(state.values[j] - exact)) + "\n";
    }
    return text;
}

std::string dirichlet_snapshot_csv(const BoundedGridFunction& state,
                                   const DirichletConfig& cfg,
                                   const OutputMetadata& meta) {
    std::string text = metadata_line(meta);
    text += "x,u_numeric,u_exact,abs_error,zone\n";
    for (Eigen::Index j = 0; j <= state.grid.cells; ++j) {
        const double x = state.grid.node(j);
        const double exact = exact_dirichlet_eigen(cfg.t_final, x, cfg.nu, cfg.a, cfg.b);
        text += format_double(x) + "," + format_double(state.values[j]) + "," +
                format_double(exact) + "," +
                format_double(std::abs(state.values[j] - exact)) + "," +
                (cfg.in_boundary_zone(x) ? "boundary" : "interior") + "\n";
    }
    return text;
}

std::string burgers_snapshot_csv(const VectorField2D& field, const OutputMetadata& meta) {
    std::string text = metadata_line(meta);
    text += "x,y,u1,u2\n";
    for (Eigen::Index i = 0; i < field.grid.m; ++i) {
        for (Eigen::Index j = 0; j < field.grid.m; ++j) {
            text += format_double(field.grid.coord(i)) + "," +
                    format_double(field.grid.coord(j)) + "," +
                    format_double(field.u1(i, j)) + "," + format_double(field.u2(i, j)) +
                    "\n";
        }
    }
    return text;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    fields.push_back(field);
    return fields;
}

}  // namespace

CsvDocument parse_csv_text(const std::string& text) {
    CsvDocument doc;
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            doc.comments.push_back(line);
            continue;
        }
        if (!header_seen) {
            doc.header = split_csv_line(line);
            header_seen = true;
        } else {
            doc.rows.push_back(split_csv_line(line));
        }
    }
    return doc;
}

CsvDocument parse_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv_text(buf.str());
}

namespace {

// Two-decimal fixed format for SVG coordinates; deterministic and compact.
std::string svg_num(double v) {
    const double r = std::round(v * 100.0) / 100.0;
    std::string s = format_double(r);
    return s;
}

const char* kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                               "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

}  // namespace

std::string svg_loglog_plot(const ConvergenceTable& table) {
    if (table.rows.empty()) throw std::invalid_argument("svg_loglog_plot: empty table");

    // Collect series keyed by n_mc, points (log10 n, log10 rms).
    std::vector<int> series;
    for (const auto& row : table.rows) {
        if (std::find(series.begin(), series.end(), row.n_mc) == series.end()) {
            series.push_back(row.n_mc);
        }
    }
    std::sort(series.begin(), series.end());

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& row : table.rows) {
        const double lx = std::log10(static_cast<double>(row.n));
        const double ly = 0.5 * std::log10(row.mean_sq_error);
        xmin = std::min(xmin, lx);
        xmax = std::max(xmax, lx);
        ymin = std::min(ymin, ly);
        ymax = std::max(ymax, ly);
    }
    if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
    if (ymax - ymin < 1e-12) ymax = ymin + 1.0;

    const double width = 640.0, height = 480.0;
    const double ml = 70.0, mr = 20.0, mt = 30.0, mb = 50.0;
    const auto px = [&](double lx) {
        return ml + (lx - xmin) / (xmax - xmin) * (width - ml - mr);
    };
    const auto py = [&](double ly) {
        return height - mb - (ly - ymin) / (ymax - ymin) * (height - mt - mb);
    };

    std::string svg =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
        "viewBox=\"0 0 640 480\">\n";
    svg += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
    svg += "<text x=\"320\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
           "RMS error vs n (log-log)</text>\n";
    // axes
    svg += "<line x1=\"" + svg_num(ml) + "\" y1=\"" + svg_num(height - mb) + "\" x2=\"" +
           svg_num(width - mr) + "\" y2=\"" + svg_num(height - mb) +
           "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + svg_num(ml) + "\" y1=\"" + svg_num(mt) + "\" x2=\"" +
           svg_num(ml) + "\" y2=\"" + svg_num(height - mb) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + svg_num((ml + width - mr) / 2) + "\" y=\"" +
           svg_num(height - 15.0) +
           "\" text-anchor=\"middle\" font-size=\"12\">log10(n)</text>\n";
    svg += "<text x=\"15\" y=\"" + svg_num((mt + height - mb) / 2) +
           "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 15 " +
           svg_num((mt + height - mb) / 2) + ")\">log10(RMS error)</text>\n";

    // dashed slope -1/2 guide through the first point of the first series
    {
        double gx0 = 0.0, gy0 = 0.0;
        bool found = false;
        for (const auto& row : table.rows) {
            if (row.n_mc == series.front() && !found) {
                gx0 = std::log10(static_cast<double>(row.n));
                gy0 = 0.5 * std::log10(row.mean_sq_error);
                found = true;
            }
        }
        const double gy1 = gy0 - 0.5 * (xmax - gx0);
        svg += "<line x1=\"" + svg_num(px(gx0)) + "\" y1=\"" + svg_num(py(gy0)) +
               "\" x2=\"" + svg_num(px(xmax)) + "\" y2=\"" + svg_num(py(gy1)) +
               "\" stroke=\"black\" stroke-dasharray=\"6,4\"/>\n";
    }

    for (std::size_t s = 0; s < series.size(); ++s) {
        std::string points;
        for (const auto& row : table.rows) {
            if (row.n_mc != series[s]) continue;
            const double lx = std::log10(static_cast<double>(row.n));
            const double ly = 0.5 * std::log10(row.mean_sq_error);
            points += svg_num(px(lx)) + "," + svg_num(py(ly)) + " ";
        }
        const char* color = kSeriesColors[s % 8];
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
        svg += "<text x=\"" + svg_num(width - mr - 90.0) + "\" y=\"" +
               svg_num(mt + 18.0 * static_cast<double>(s) + 10.0) +
               "\" font-size=\"12\" fill=\"" + color + "\">N=" +
               std::to_string(series[s]) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

namespace {

// Blue-white-red map over [lo, hi].
std::string heat_color(double v, double lo, double hi) {
    double t = hi > lo ? (v - lo) / (hi - lo) : 0.5;
    t = std::clamp(t, 0.0, 1.0);
    int r, g, b;
    if (t < 0.5) {
        const double s = t / 0.5;
        r = static_cast<int>(std::lround(255 * s));
        g = static_cast<int>(std::lround(255 * s));
        b = 255;
    } else {
        const double s = (t - 0.5) / 0.5;
        r = 255;
        g = static_cast<int>(std::lround(255 * (1.0 - s)));
        b = static_cast<int>(std::lround(255 * (1.0 - s)));
    }
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace

std::string svg_heatmap(const Eigen::MatrixXd& field, const Grid2D& grid,
                        const std::string& title) {
    const Eigen::Index m = grid.m;
    const double lo = field.minCoeff();
    const double hi = field.maxCoeff();
    const double plot = 440.0;
    const double cell = plot / static_cast<double>(m);
    std::string svg =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"560\" height=\"500\" "
        "viewBox=\"0 0 560 500\">\n";
    svg += "<rect width=\"560\" height=\"500\" fill=\"white\"/>\n";
    svg += "<text x=\"250\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" + title +
           "</text>\n";
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            const double x = 30.0 + static_cast<double>(i) * cell;
            const double y = 30.0 + static_cast<double>(m - 1 - j) * cell;
            svg += "<rect x=\"" + svg_num(x) + "\" y=\"" + svg_num(y) + "\" width=\"" +
                   svg_num(cell + 0.5) + "\" height=\"" + svg_num(cell + 0.5) +
                   "\" fill=\"" + heat_color(field(i, j), lo, hi) + "\"/>\n";
        }
    }
    // legend: ten discrete stops from lo to hi
    for (int k = 0; k < 10; ++k) {
        const double v = lo + (hi - lo) * (static_cast<double>(k) + 0.5) / 10.0;
        const double y = 30.0 + (9 - k) * 40.0;
        svg += "<rect x=\"500\" y=\"" + svg_num(y) + "\" width=\"20\" height=\"40\" fill=\"" +
               heat_color(v, lo, hi) + "\"/>\n";
    }
    svg += "<text x=\"530\" y=\"440\" font-size=\"10\">" + format_double(lo) + "</text>\n";
    svg += "<text x=\"530\" y=\"40\" font-size=\"10\">" + format_double(hi) + "</text>\n";
    svg += "</svg>\n";
    return svg;
}

}  // namespace mcsl
