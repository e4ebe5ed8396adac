#include "mcsl/harness.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "mcsl/config.hpp"
#include "mcsl/parallel.hpp"
#include "mcsl/rng.hpp"
#include "mcsl/transition.hpp"

namespace mcsl {

HeatConfig to_heat_config(const HeatRunSpec& spec, std::uint64_t seed) {
    HeatConfig cfg;
    cfg.nu = spec.nu;
    cfg.dt = spec.dt;
    cfg.grid = PeriodicGrid1D(spec.m_s);
    cfg.n_mc = spec.n_mc;
    cfg.t_final = spec.t_final;
    cfg.seed = seed;
    cfg.validate();
    return cfg;
}

DirichletConfig to_dirichlet_config(const DirichletRunSpec& spec, std::uint64_t seed) {
    DirichletConfig cfg;
    cfg.a = spec.a;
    cfg.b = spec.b;
    cfg.nu = spec.nu;
    cfg.dt = spec.dt;
    cfg.dx = spec.dx;
    cfg.n_interior = spec.n_interior;
    cfg.n_boundary = spec.n_boundary;
    cfg.tau = spec.tau;
    cfg.boundary_margin = spec.boundary_margin;
    cfg.t_final = spec.t_final;
    cfg.seed = seed;
    cfg.use_bridge_test = spec.use_bridge_test;
    cfg.validate();
    return cfg;
}

BurgersConfig to_burgers_config(const BurgersRunSpec& spec, std::uint64_t seed) {
    BurgersConfig cfg;
    cfg.nu = spec.nu;
    cfg.dt = spec.dt;
    cfg.dx = spec.dx;
    cfg.n_interior = spec.n_interior;
    cfg.n_boundary = spec.n_boundary;
    cfg.tau = spec.tau;
    cfg.interior_halfwidth = spec.interior_halfwidth;
    cfg.t_final = spec.t_final;
    cfg.seed = seed;
    cfg.forcing = spec.forcing == "none" ? ForcingKind::None : ForcingKind::SineProduct;
    cfg.validate();
    return cfg;
}

McErrorEstimate estimate_mc_error(const ExperimentConfig& cfg, int reps,
                                  ReferenceKind reference) {
    if (reps < 2) throw std::invalid_argument("estimate_mc_error: need reps >= 2");
    McErrorEstimate est;
    est.per_rep.assign(static_cast<std::size_t>(reps), 0.0);

    if (cfg.kind == ExperimentKind::HeatPeriodic) {
        const HeatConfig base = to_heat_config(cfg.heat, cfg.seed);
        const GridFunction1D u0 =
            initial_wave(base.grid, cfg.heat.initial.phase, cfg.heat.initial.mode);
        GridFunction1D ref{base.grid, Eigen::VectorXd()};
        if (reference == ReferenceKind::DeterministicEvolve) {
            ref = deterministic_evolve(u0, base, base.step_count());
        } else {
            ref = project(
                [&](double x) {
                    return exact_heat(base.t_final, x, base.nu, cfg.heat.initial.mode,
                                      cfg.heat.initial.phase);
                },
                base.grid);
        }
        parallel_for(static_cast<std::size_t>(reps), cfg.threads, [&](std::size_t r) {
            HeatConfig run_cfg = base;
            run_cfg.seed = derive_subseed(cfg.seed, r);
            const HeatRunResult result = run_heat(run_cfg, u0, 0, 1);
            GridFunction1D diff{base.grid, result.final.values - ref.values};
            const double err = norm_l2(diff);
            est.per_rep[r] = err * err;
        });
    } else if (cfg.kind == ExperimentKind::HeatDirichlet) {
        if (reference == ReferenceKind::DeterministicEvolve) {
            throw std::invalid_argument("estimate_mc_error: no deterministic reference for the bounded domain");
        }
        const DirichletConfig base = to_dirichlet_config(cfg.dirichlet, cfg.seed);
        parallel_for(static_cast<std::size_t>(reps), cfg.threads, [&](std::size_t r) {
            DirichletConfig run_cfg = base;
            run_cfg.seed = derive_subseed(cfg.seed, r);
            const DirichletRunResult result = run_dirichlet(
                run_cfg,
                [&](double x) { return exact_dirichlet_eigen(0.0, x, run_cfg.nu, run_cfg.a, run_cfg.b); },
                1);
            est.per_rep[r] = result.l2_error * result.l2_error;
        });
    } else {
        throw std::invalid_argument("estimate_mc_error: supported kinds are heat_periodic and heat_dirichlet");
    }

    double mean = 0.0;
    for (double v : est.per_rep) mean += v;
    mean /= static_cast<double>(reps);
    double var = 0.0;
    for (double v : est.per_rep) var += (v - mean) * (v - mean);
    var /= static_cast<double>(reps - 1);
    est.mean_sq_l2 = mean;
    est.halfwidth95 = 1.96 * std::sqrt(var / static_cast<double>(reps));
    return est;
}

SlopeFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw std::invalid_argument("fit_loglog: need at least two points");
    }
    const auto n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    SlopeFit fit;
    const double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / n);
    return fit;
}

ConvergenceTable convergence_study(const ExperimentConfig& cfg) {
    const ConvergenceSpec& spec = cfg.convergence;
    if (spec.n_values.empty() || spec.n_mc_values.empty()) {
        throw std::invalid_argument("convergence_study: sweep lists must be nonempty");
    }
    if (spec.repetitions < 2) {
        throw std::invalid_argument("convergence_study: repetitions must be >= 2");
    }
    ConvergenceTable table;
    for (int n_mc : spec.n_mc_values) {
        std::vector<double> lx, ly;
        for (int n : spec.n_values) {
            ExperimentConfig cell = cfg;
            const double step = 1.0 / static_cast<double>(n);
            if (spec.pde == "heat_dirichlet") {
                cell.kind = ExperimentKind::HeatDirichlet;
                cell.dirichlet = DirichletRunSpec{};
                cell.dirichlet.nu = spec.nu;
                cell.dirichlet.dt = step;
                cell.dirichlet.dx = step;
                cell.dirichlet.n_interior = n_mc;
                cell.dirichlet.n_boundary = n_mc * spec.nb_over_ni;
                cell.dirichlet.tau = step / static_cast<double>(spec.tau_refine);
                cell.dirichlet.boundary_margin = spec.boundary_margin;
                cell.dirichlet.t_final = spec.t_final;
            } else {
                cell.kind = ExperimentKind::HeatPeriodic;
                cell.heat = HeatRunSpec{};
                cell.heat.nu = spec.nu;
                cell.heat.dt = step;
                cell.heat.m_s = n;
                cell.heat.n_mc = n_mc;
                cell.heat.t_final = spec.t_final;
                cell.heat.initial = spec.initial;
            }
            // Each (n, N) cell derives its own seed so cells are independent.
            cell.seed = derive_subseed(cfg.seed, (static_cast<std::uint64_t>(n_mc) << 32) ^
                                                     static_cast<std::uint64_t>(n));
            const auto start = std::chrono::steady_clock::now();
            const McErrorEstimate est = estimate_mc_error(cell, spec.repetitions);
            const auto stop = std::chrono::steady_clock::now();
            ConvergenceRow row;
            row.n = n;
            row.n_mc = n_mc;
            row.mean_sq_error = est.mean_sq_l2;
            row.std_error = est.halfwidth95;
            row.runtime_seconds = std::chrono::duration<double>(stop - start).count();
            table.rows.push_back(row);
            lx.push_back(std::log10(static_cast<double>(n)));
            ly.push_back(0.5 * std::log10(est.mean_sq_l2));
        }
        if (lx.size() >= 3) {
            SlopeFit fit = fit_loglog(lx, ly);
            fit.n_mc = n_mc;
            table.slopes.push_back(fit);
        }
    }
    return table;
}

double series_error_ratio(const ConvergenceTable& table, int n_mc_a, int n_mc_b) {
    double shift = 0.0;
    int count = 0;
    for (const auto& ra : table.rows) {
        if (ra.n_mc != n_mc_a) continue;
        for (const auto& rb : table.rows) {
            if (rb.n_mc != n_mc_b || rb.n != ra.n) continue;
            shift += 0.5 * (std::log10(ra.mean_sq_error) - std::log10(rb.mean_sq_error));
            ++count;
        }
    }
    if (count == 0) throw std::invalid_argument("series_error_ratio: series not found");
    return std::pow(10.0, shift / static_cast<double>(count));
}

BoundReport error_bound_report(const HeatConfig& cfg, const GridFunction1D& u0) {
    BoundReport report;
    const double dx = cfg.grid.dx;
    const double dt = cfg.dt;
    const double h1 = seminorm_h1(u0);
    report.u0_h1_sq = h1 * h1;
    const double log_term = 1.0 + std::abs(std::log(dt));
    report.a_nu = 1.0 + dx / (std::sqrt(cfg.nu) * dt) + dx * dx / (cfg.nu * dt * dt) * log_term;
    report.b_nu = (cfg.nu + dx * dx / dt) * report.u0_h1_sq;
    const double n = static_cast<double>(cfg.n_mc);
    for (int p = 0; p <= 2; ++p) {
        report.rhs[p] = report.u0_h1_sq * (1.0 + dx * dx / dt) * std::pow(report.a_nu, p) *
                        (dt / n + std::pow(n, -(p + 1.0)));
    }
    report.anti_cfl_ratio = cfg.anti_cfl_ratio();
    return report;
}

std::string bound_report_text(const BoundReport& report) {
    std::string text;
    text += "u0_h1_sq = " + format_double(report.u0_h1_sq) + "\n";
    text += "a_nu = " + format_double(report.a_nu) + "\n";
    text += "b_nu = " + format_double(report.b_nu) + "\n";
    for (int p = 0; p <= 2; ++p) {
        text += "rhs_p" + std::to_string(p) + " = " + format_double(report.rhs[p]) + "\n";
    }
    text += "anti_cfl_ratio = " + format_double(report.anti_cfl_ratio) + "\n";
    return text;
}

std::string verify_report_text(const ExperimentConfig& cfg) {
    const VerifySpec& spec = cfg.verify;
    std::string text;
    const PeriodicGrid1D grid(spec.m_s);
    const double sigma = sigma_step(spec.nu, spec.dt);
    const CirculantKernel kernel = q_kernel(grid, sigma);
    const QPropertyReport q = verify_q_properties(kernel);
    const auto line = [&](const std::string& name, bool ok, double dev) {
        text += name + (ok ? " PASS" : " FAIL") + " max_deviation=" + format_double(dev) + "\n";
    };
    line("q_nonnegative", q.nonnegative, std::max(0.0, -q.min_entry));
    line("q_row_stochastic", q.row_stochastic, q.row_sum_deviation);
    line("q_symmetric", q.symmetric, q.symmetry_deviation);

    const PeriodicGrid1D p_grid(spec.p_m_s);
    double max_row_dev = 0.0;
    double min_entry = 0.0;
    for (int s = 0; s < spec.p_samples; ++s) {
        const TransitionSample sample = sample_p_matrix(
            p_grid, sigma, 0, static_cast<std::uint32_t>(s), cfg.seed);
        min_entry = std::min(min_entry, sample.entries.minCoeff());
        for (Eigen::Index j = 0; j < p_grid.m_s; ++j) {
            max_row_dev = std::max(max_row_dev, std::abs(sample.entries.row(j).sum() - 1.0));
        }
    }
    line("p_rows_stochastic", max_row_dev <= 1e-12 && min_entry >= 0.0, max_row_dev);

    const Eigen::VectorXd decay = kernel_diag_decay(grid, sigma, spec.decay_ell_max);
    bool monotone = true;
    double worst = 0.0;
    for (int i = 1; i < decay.size(); ++i) {
        const double rise = decay[i] - decay[i - 1];
        worst = std::max(worst, rise);
        if (rise > 1e-12) monotone = false;
    }
    line("kernel_diag_nonincreasing", monotone, worst);
    text += "kernel_diag_first = " + format_double(decay[0]) + "\n";
    text += "kernel_diag_last = " + format_double(decay[decay.size() - 1]) + "\n";
    return text;
}

namespace {

std::string join_path(const std::string& dir, const std::string& name) {
    return dir.empty() ? name : dir + "/" + name;
}

void ensure_output_dir(const std::string& dir) {
    if (dir.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw io_error("cannot create output directory: " + dir);
}

std::string time_tag(double t) {
    std::string tag = format_double(t);
    for (char& c : tag) {
        if (c == '.') c = 'p';
    }
    return tag;
}

}  // namespace

std::vector<std::string> run_experiment(const ExperimentConfig& cfg) {
    ensure_output_dir(cfg.output_dir);
    const OutputMetadata meta = make_metadata(cfg);
    std::vector<std::string> written;
    const auto emit = [&](const std::string& name, const std::string& content) {
        const std::string path = join_path(cfg.output_dir, name);
        write_text_file(path, content);
        written.push_back(path);
    };

    switch (cfg.kind) {
        case ExperimentKind::HeatPeriodic: {
            const HeatConfig run_cfg = to_heat_config(cfg.heat, cfg.seed);
            const GridFunction1D u0 =
                initial_wave(run_cfg.grid, cfg.heat.initial.phase, cfg.heat.initial.mode);
            const HeatRunResult result =
                run_heat(run_cfg, u0, cfg.record_every, cfg.threads);
            if (cfg.record_every > 0) {
                for (std::size_t k = 0; k < result.record.states.size(); ++k) {
                    const double t = result.record.times[k];
                    emit("heat_snapshot_t" + time_tag(t) + ".csv",
                         heat_snapshot_csv(result.record.states[k], t, run_cfg.nu,
                                           cfg.heat.initial.phase, cfg.heat.initial.mode, meta));
                }
            }
            emit("heat_snapshot.csv",
                 heat_snapshot_csv(result.final, run_cfg.t_final, run_cfg.nu,
                                   cfg.heat.initial.phase, cfg.heat.initial.mode, meta));
            emit("bound_report.txt",
                 metadata_line(meta) + bound_report_text(error_bound_report(run_cfg, u0)));
            break;
        }
        case ExperimentKind::HeatDirichlet: {
            const DirichletConfig run_cfg = to_dirichlet_config(cfg.dirichlet, cfg.seed);
            const DirichletRunResult result = run_dirichlet(
                run_cfg,
                [&](double x) { return exact_dirichlet_eigen(0.0, x, run_cfg.nu, run_cfg.a, run_cfg.b); },
                cfg.threads);
            emit("dirichlet_snapshot.csv", dirichlet_snapshot_csv(result.final, run_cfg, meta));
            emit("dirichlet_errors.txt", metadata_line(meta) +
                                             "l2_error = " + format_double(result.l2_error) +
                                             "\nsup_error = " + format_double(result.sup_error) + "\n");
            break;
        }
        case ExperimentKind::Burgers2d: {
            const BurgersConfig run_cfg = to_burgers_config(cfg.burgers, cfg.seed);
            const BurgersRunResult result =
                run_burgers(run_cfg, cfg.burgers.snapshot_times, cfg.threads);
            for (const auto& snap : result.snapshots) {
                const std::string tag = time_tag(snap.time);
                emit("burgers_t" + tag + ".csv", burgers_snapshot_csv(snap.field, meta));
                emit("burgers_u1_t" + tag + ".svg",
                     svg_metadata_comment(meta) +
                         svg_heatmap(snap.field.u1, snap.field.grid,
                                     "u1 at t=" + format_double(snap.time)));
                emit("burgers_u2_t" + tag + ".svg",
                     svg_metadata_comment(meta) +
                         svg_heatmap(snap.field.u2, snap.field.grid,
                                     "u2 at t=" + format_double(snap.time)));
            }
            break;
        }
        case ExperimentKind::Convergence: {
            const ConvergenceTable table = convergence_study(cfg);
            emit("convergence.csv", convergence_csv(table, meta));
            emit("slopes.csv", slopes_csv(table, meta));
            emit("convergence.svg", svg_metadata_comment(meta) + svg_loglog_plot(table));
            break;
        }
        case ExperimentKind::Verify: {
            const std::string report = verify_report_text(cfg);
            emit("verify_report.txt", metadata_line(meta) + report);
            // CSV twin of the plain-text report
            std::string csv = metadata_line(meta);
            csv += "check,result,deviation\n";
            std::string raw;
            for (char c : report + std::string("\n")) {
                if (c != '\n') {
                    raw.push_back(c);
                    continue;
                }
                const auto pass = raw.find(" PASS ");
                const auto fail = raw.find(" FAIL ");
                const auto mark = pass != std::string::npos ? pass : fail;
                if (mark != std::string::npos) {
                    const std::string name = raw.substr(0, mark);
                    const std::string verdict = pass != std::string::npos ? "PASS" : "FAIL";
                    const auto eq = raw.find('=', mark);
                    const std::string dev = eq == std::string::npos ? "" : raw.substr(eq + 1);
                    csv += name + "," + verdict + "," + dev + "\n";
                }
                raw.clear();
            }
            emit("verify_report.csv", csv);
            break;
        }
    }
    return written;
}

}  // namespace mcsl
