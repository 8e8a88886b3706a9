#include "persmode/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace persmode::io {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    line = trim(line);
    if (!line.empty()) return true;
  }
  return false;
}

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    if (t == "inf") return std::numeric_limits<double>::infinity();
    throw std::invalid_argument("malformed number '" + t + "'");
  }
  return v;
}

void write_samples_csv(std::ostream& out, const PointSet& samples) {
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    for (Eigen::Index a = 0; a < samples.cols(); ++a) {
      if (a) out << ',';
      out << format_double(samples(i, a));
    }
    out << '\n';
  }
}

PointSet read_samples_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& field : split(line, ',')) {
      try {
        row.push_back(parse_double(field));
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("samples line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::invalid_argument("samples line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(rows.front().size()) + " columns");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("samples file holds no points");
  PointSet out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t a = 0; a < rows[i].size(); ++a) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) = rows[i][a];
  }
  return out;
}

void write_diagram_csv(std::ostream& out, const PersistenceDiagram& diagram) {
  const int d = diagram.grid ? diagram.grid->dim() : 0;
  out << "birth,death,essential,birth_cell";
  for (int a = 0; a < d; ++a) out << ",x" << a;
  out << '\n';
  for (const auto& p : diagram.points) {
    out << format_double(p.birth) << ',' << format_double(p.death) << ',' << (p.essential ? 1 : 0) << ','
        << p.birth_cell;
    if (d > 0) {
      const Point c = diagram.grid->cell_center(p.birth_cell);
      for (int a = 0; a < d; ++a) out << ',' << format_double(c[a]);
    }
    out << '\n';
  }
}

PersistenceDiagram read_diagram_csv(std::istream& in) {
  std::string line;
  if (!next_data_line(in, line)) throw std::invalid_argument("diagram file is empty");
  const auto header = split(line, ',');
  if (header.size() < 4 || header[0] != "birth" || header[1] != "death" || header[2] != "essential" ||
      header[3] != "birth_cell") {
    throw std::invalid_argument("diagram file: expected header birth,death,essential,birth_cell,...");
  }
  PersistenceDiagram out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != header.size()) {
      throw std::invalid_argument("diagram line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(header.size()) + " fields");
    }
    PersistencePoint p;
    p.birth = parse_double(fields[0]);
    p.death = parse_double(fields[1]);
    const std::string ess = trim(fields[2]);
    if (ess != "0" && ess != "1") throw std::invalid_argument("diagram line " + std::to_string(line_no) + ": essential must be 0 or 1");
    p.essential = ess == "1";
    const std::string cell = trim(fields[3]);
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), p.birth_cell);
    if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
      throw std::invalid_argument("diagram line " + std::to_string(line_no) + ": malformed birth_cell");
    }
    if (!(p.birth >= p.death) || p.death < 0.0) {
      throw std::invalid_argument("diagram line " + std::to_string(line_no) + ": need birth >= death >= 0");
    }
    out.points.push_back(p);
  }
  return out;
}

void write_modes_csv(std::ostream& out, const ModeSet& locations, const std::vector<double>& values) {
  for (int a = 0; a < locations.dim; ++a) out << 'x' << a << ',';
  out << "value\n";
  for (Eigen::Index i = 0; i < locations.size(); ++i) {
    for (int a = 0; a < locations.dim; ++a) out << format_double(locations.points(i, a)) << ',';
    out << format_double(values[static_cast<std::size_t>(i)]) << '\n';
  }
}

nlohmann::json diagram_to_json(const PersistenceDiagram& diagram) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : diagram.points) {
    points.push_back({{"birth", p.birth},
                      {"death", p.death},
                      {"essential", p.essential},
                      {"birth_cell", p.birth_cell},
                      {"lifetime", number_or_null(p.lifetime())}});
  }
  return points;
}

nlohmann::json mode_estimate_to_json(const ModeEstimate& est) {
  nlohmann::json modes = nlohmann::json::array();
  for (const auto& m : est.modes) {
    modes.push_back({{"location", std::vector<double>(m.location.data(), m.location.data() + m.location.size())},
                     {"value", m.value},
                     {"lifetime", number_or_null(m.lifetime)},
                     {"birth_cell", m.birth_cell},
                     {"location_cell", m.location_cell},
                     {"essential", m.essential}});
  }
  nlohmann::json out;
  out["schema_version"] = kSchemaVersion;
  out["k_hat"] = est.k_hat;
  out["threshold_rule"] = est.rule == ThresholdRule::KnownL ? "known_l" : "adaptive";
  out["threshold_used"] = est.threshold_used;
  out["h"] = est.calibration.h;
  out["cells_per_axis"] = est.calibration.cells_per_axis;
  out["calibration_condition_holds"] = est.calibration.condition_holds;
  out["dilation_radius"] = est.dilation;
  out["modes"] = std::move(modes);
  out["diagram"] = diagram_to_json(est.diagram);
  return out;
}

void write_results_csv(std::ostream& out, const std::vector<ExperimentResult>& results, bool with_timing) {
  out << "density,n,seed,trial,h,cells_per_axis,mu,alpha,threshold,k_hat,d_b,d_M,max_value_error";
  if (with_timing) out << ",wall_seconds";
  out << '\n';
  for (const auto& r : results) {
    out << r.density << ',' << r.n << ',' << r.seed << ',' << r.trial << ',' << format_double(r.h) << ','
        << r.cells_per_axis << ',' << format_double(r.mu) << ',' << format_double(r.alpha) << ','
        << format_double(r.threshold) << ',' << r.k_hat << ',' << format_double(r.d_b) << ','
        << format_double(r.d_M) << ',' << format_double(r.max_value_error);
    if (with_timing) out << ',' << format_double(r.wall_seconds);
    out << '\n';
  }
}

nlohmann::json rate_summary_to_json(const RateSummary& summary, const std::string& density) {
  nlohmann::json medians = nlohmann::json::array();
  for (const auto& p : summary.medians) medians.push_back({{"n", p.n}, {"median_d_b", p.median_d_b}});
  return {{"schema_version", kSchemaVersion},
          {"density", density},
          {"abscissa", "log(n)/n"},
          {"slope", summary.slope},
          {"intercept", summary.intercept},
          {"median_non_increasing", summary.non_increasing},
          {"medians", std::move(medians)}};
}

namespace {

constexpr double kSize = 480.0;
constexpr double kMargin = 40.0;
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

struct Frame {
  double lo = 0.0, hi = 1.0;
  double x(double v) const { return kMargin + (v - lo) / (hi - lo) * (kSize - 2 * kMargin); }
  double y(double v) const { return kSize - kMargin - (v - lo) / (hi - lo) * (kSize - 2 * kMargin); }
};

void svg_open(std::ostringstream& s) {
  s << std::setprecision(6);
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
    << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

}  // namespace

std::string diagram_svg(const std::vector<std::pair<std::string, PersistenceDiagram>>& diagrams) {
  double top = 0.0;
  for (const auto& [name, d] : diagrams) {
    for (const auto& p : d.points) top = std::max(top, p.birth);
  }
  Frame f{0.0, top > 0.0 ? 1.05 * top : 1.0};
  std::ostringstream s;
  svg_open(s);
  s << "<line x1=\"" << f.x(f.lo) << "\" y1=\"" << f.y(f.lo) << "\" x2=\"" << f.x(f.hi) << "\" y2=\"" << f.y(f.hi)
    << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  s << "<text x=\"" << kSize / 2 << "\" y=\"" << kSize - 8 << "\" text-anchor=\"middle\" font-size=\"12\">death</text>\n";
  s << "<text x=\"12\" y=\"" << kSize / 2 << "\" font-size=\"12\" transform=\"rotate(-90 12 " << kSize / 2
    << ")\" text-anchor=\"middle\">birth</text>\n";
  for (std::size_t k = 0; k < diagrams.size(); ++k) {
    const char* color = kPalette[k % std::size(kPalette)];
    s << "<text x=\"" << kMargin + 4 << "\" y=\"" << kMargin / 2 + 14.0 * static_cast<double>(k)
      << "\" font-size=\"12\" fill=\"" << color << "\">" << diagrams[k].first << "</text>\n";
    for (const auto& p : diagrams[k].second.points) {
      s << "<circle cx=\"" << f.x(p.death) << "\" cy=\"" << f.y(p.birth) << "\" r=\"" << (p.essential ? 5 : 3)
        << "\" fill=\"" << (p.essential ? "none" : color) << "\" stroke=\"" << color << "\"/>\n";
    }
  }
  s << "</svg>\n";
  return s.str();
}

std::string modes_svg(const PointSet& samples, const ModeSet& modes) {
  Frame f{0.0, 1.0};
  std::ostringstream s;
  svg_open(s);
  s << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kSize - 2 * kMargin << "\" height=\""
    << kSize - 2 * kMargin << "\" fill=\"none\" stroke=\"gray\"/>\n";
  const bool one_d = samples.cols() == 1 || (samples.rows() == 0 && modes.dim == 1);
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    const double x = f.x(samples(i, 0));
    const double y = one_d ? f.y(0.02 + 0.1 * static_cast<double>(i % 97) / 97.0) : f.y(samples(i, 1));
    s << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"0.8\" fill=\"#1f77b4\" fill-opacity=\"0.4\"/>\n";
  }
  for (Eigen::Index i = 0; i < modes.size(); ++i) {
    const double x = f.x(modes.points(i, 0));
    const double y = one_d ? f.y(0.5) : f.y(modes.points(i, 1));
    s << "<path d=\"M " << x - 6 << ' ' << y - 6 << " L " << x + 6 << ' ' << y + 6 << " M " << x - 6 << ' '
      << y + 6 << " L " << x + 6 << ' ' << y - 6 << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << contents;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace persmode::io
