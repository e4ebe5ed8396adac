#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcsl/burgers2d.hpp"
#include "mcsl/dirichlet.hpp"
#include "mcsl/grid.hpp"
#include "mcsl/heat_periodic.hpp"

namespace mcsl {

/// Thrown for unwritable/unreadable paths; the CLI maps it to exit code 2.
class io_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Shortest round-trip decimal form, locale-independent.
std::string format_double(double value);

/// Reproducibility stamp placed as a comment line atop every artifact.
struct OutputMetadata {
    std::uint64_t seed = 0;
    std::string version;
    std::string config_hash;
};

std::string metadata_line(const OutputMetadata& meta);

/// The same stamp as an XML comment, placed ahead of the root SVG element.
std::string svg_metadata_comment(const OutputMetadata& meta);

void write_text_file(const std::string& path, const std::string& content);

struct ConvergenceRow {
    int n = 0;
    int n_mc = 0;
    double mean_sq_error = 0.0;
    double std_error = 0.0;
    double runtime_seconds = 0.0;
};

struct SlopeFit {
    int n_mc = 0;
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    std::vector<SlopeFit> slopes;
};

std::string convergence_csv(const ConvergenceTable& table, const OutputMetadata& meta);
std::string slopes_csv(const ConvergenceTable& table, const OutputMetadata& meta);

std::string heat_snapshot_csv(const GridFunction1D& state, double t, double nu,
                              WavePhase phase, int mode, const OutputMetadata& meta);

std::string dirichlet_snapshot_csv(const BoundedGridFunction& state,
                                   const DirichletConfig& cfg,
                                   const OutputMetadata& meta);

std::string burgers_snapshot_csv(const VectorField2D& field, const OutputMetadata& meta);

/// Parsed CSV: comment lines (leading '#') kept apart from the records.
struct CsvDocument {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvDocument parse_csv_text(const std::string& text);
CsvDocument parse_csv_file(const std::string& path);

/// Log-log error plot: one polyline per n_mc series plus a dashed slope -1/2
/// guide. Deterministic bytes for identical input. Throws on an empty table.
std::string svg_loglog_plot(const ConvergenceTable& table);

/// Heatmap of a nodal field with a linear color map and a legend;
/// one rect per grid node.
std::string svg_heatmap(const Eigen::MatrixXd& field, const Grid2D& grid,
                        const std::string& title);

}  // namespace mcsl
