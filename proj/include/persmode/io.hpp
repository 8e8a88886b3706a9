#pragma once

#include "persmode/experiment.hpp"
#include "persmode/mode_estimation.hpp"
#include "persmode/persistence_h0.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace persmode::io {

inline constexpr int kSchemaVersion = 1;

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
double parse_double(const std::string& text);

/// Samples: no header, one point per row, comma-separated coordinates.
void write_samples_csv(std::ostream& out, const PointSet& samples);
PointSet read_samples_csv(std::istream& in);

/// Diagram: header birth,death,essential,birth_cell[,x0,x1,...] where the
/// coordinates are the birth-cell centre (present only with a grid).
void write_diagram_csv(std::ostream& out, const PersistenceDiagram& diagram);
PersistenceDiagram read_diagram_csv(std::istream& in);

/// Modes: header x0,...,x{d-1},value.
void write_modes_csv(std::ostream& out, const ModeSet& locations, const std::vector<double>& values);

nlohmann::json diagram_to_json(const PersistenceDiagram& diagram);
nlohmann::json mode_estimate_to_json(const ModeEstimate& estimate);

/// Results CSV; the wall-time column is optional because it breaks
/// byte-for-byte reproducibility.
void write_results_csv(std::ostream& out, const std::vector<ExperimentResult>& results, bool with_timing);
nlohmann::json rate_summary_to_json(const RateSummary& summary, const std::string& density);

/// Static SVG: birth/death scatter with the diagonal.
std::string diagram_svg(const std::vector<std::pair<std::string, PersistenceDiagram>>& diagrams);
/// Static SVG: sample cloud (1-d as a rug, 2-d as dots) with mode markers.
std::string modes_svg(const PointSet& samples, const ModeSet& modes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace persmode::io
