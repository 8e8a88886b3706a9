#include "persmode/cli.hpp"

#include "persmode/experiment.hpp"
#include "persmode/io.hpp"
#include "persmode/mode_estimation.hpp"
#include "persmode/reference_densities.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace persmode::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DensityOptions {
  std::string name;
  std::vector<std::string> params;

  void add(CLI::App& app, bool required) {
    auto* opt = app.add_option("--density", name, "Reference density name");
    if (required) opt->required();
    app.add_option("--param", params, "Density parameter key=value (dim, h, m, L, alpha)");
  }

  DensitySpec build() const {
    LowerBoundParams p;
    for (const auto& kv : params) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw UsageError("--param expects key=value, got '" + kv + "'");
      const std::string key = kv.substr(0, eq);
      const double value = io::parse_double(kv.substr(eq + 1));
      if (key == "dim") p.dim = static_cast<int>(value);
      else if (key == "h") p.h = value;
      else if (key == "m") p.m = static_cast<int>(value);
      else if (key == "L") p.L = value;
      else if (key == "alpha") p.alpha = value;
      else throw UsageError("unknown density parameter '" + key + "'");
    }
    try {
      return density_by_name(name, p);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
};

struct EstimatorOptions {
  std::optional<double> alpha, mu, h, h_const, l;
  std::optional<int> dilation;

  void add(CLI::App& app) {
    app.add_option("--alpha", alpha, "Hölder exponent in (0,1]");
    app.add_option("--mu", mu, "Reach parameter in (0,1]");
    auto* h_opt = app.add_option("--h", h, "Explicit bin width (snapped to 1/m)");
    auto* c_opt = app.add_option("--h-const", h_const, "Multiplier c in h = c (log n / n)^(1/(d+2 alpha))");
    h_opt->excludes(c_opt);
    app.add_option("--l", l, "Known minimal lifetime; selects the known-threshold estimator");
    app.add_option("--dilation", dilation, "Override the dilation radius in cells (0 disables)");
  }

  EstimatorConfig build(const std::optional<DensitySpec>& spec) const {
    EstimatorConfig c;
    if (spec) {
      const DensityPreset preset = preset_for(*spec);
      c.alpha = preset.alpha;
      c.mu = preset.mu;
      c.h_const = preset.h_const;
    } else {
      c.alpha = 0.5;
      c.mu = 1.0;
      c.h_const = 1.0;
    }
    if (alpha) c.alpha = *alpha;
    if (mu) c.mu = *mu;
    if (h_const) c.h_const = *h_const;
    c.h_override = h;
    c.l_known = l;
    c.dilation_override = dilation;
    try {
      c.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return c;
  }
};

// Samples come from --in or are drawn from --density with --n/--seed.
struct InputOptions {
  std::string in;
  DensityOptions density;
  std::int64_t n = 0;
  std::uint64_t seed = 0;

  void add(CLI::App& app) {
    app.add_option("--in", in, "Samples CSV");
    density.add(app, false);
    app.add_option("--n", n, "Number of samples to draw from --density");
    app.add_option("--seed", seed, "Sampling seed");
  }

  std::optional<DensitySpec> spec() const {
    if (density.name.empty()) return std::nullopt;
    return density.build();
  }

  PointSet load(const std::optional<DensitySpec>& spec) const {
    if (!in.empty() && spec) throw UsageError("give either --in or --density, not both");
    if (!in.empty()) {
      std::istringstream stream(io::read_file(in));
      return io::read_samples_csv(stream);
    }
    if (!spec) throw UsageError("need --in FILE or --density NAME");
    if (n < 1) throw UsageError("--density needs --n >= 1");
    return sample(*spec, n, seed);
  }
};

std::vector<std::int64_t> parse_n_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("--n-list: malformed entry '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("--n-list is empty");
  return out;
}

std::string to_string(const nlohmann::json& j) { return j.dump(2) + "\n"; }

template <typename Fn>
std::string render(Fn&& fn) {
  std::ostringstream s;
  fn(s);
  return s.str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Persistence-diagram and mode estimation from samples on [0,1]^d", "persmode"};
  app.set_help_flag("--help", "Print this help message and exit");  // -h would clash with --h
  app.require_subcommand(1);

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "Draw samples from a reference density");
  DensityOptions sample_density;
  std::int64_t sample_n = 0;
  std::uint64_t sample_seed = 0;
  std::string sample_out;
  sample_density.add(*sample_cmd, true);
  sample_cmd->add_option("--n", sample_n, "Number of points")->required();
  sample_cmd->add_option("--seed", sample_seed, "Seed");
  sample_cmd->add_option("--out", sample_out, "Output CSV")->required();

  // estimate
  auto* estimate_cmd = app.add_subcommand("estimate", "Estimate modes (adaptive unless --l is given)");
  InputOptions estimate_in;
  EstimatorOptions estimate_opts;
  std::string estimate_out;
  estimate_in.add(*estimate_cmd);
  estimate_opts.add(*estimate_cmd);
  estimate_cmd->add_option("--out", estimate_out, "Output JSON")->required();

  // diagram
  auto* diagram_cmd = app.add_subcommand("diagram", "Estimate the H0 superlevel persistence diagram");
  InputOptions diagram_in;
  EstimatorOptions diagram_opts;
  std::string diagram_out;
  diagram_in.add(*diagram_cmd);
  diagram_opts.add(*diagram_cmd);
  diagram_cmd->add_option("--out", diagram_out, "Output diagram CSV")->required();

  // bottleneck
  auto* bottleneck_cmd = app.add_subcommand("bottleneck", "Bottleneck distance between two diagram CSVs");
  std::string bottleneck_a, bottleneck_b;
  bottleneck_cmd->add_option("--a", bottleneck_a, "First diagram CSV")->required();
  bottleneck_cmd->add_option("--b", bottleneck_b, "Second diagram CSV")->required();

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "Fine-grid diagram and modes of a reference density");
  DensityOptions oracle_density;
  int oracle_fine_m = 0;
  std::string oracle_out, oracle_modes_out;
  oracle_density.add(*oracle_cmd, true);
  oracle_cmd->add_option("--fine-m", oracle_fine_m, "Cells per axis of the oracle grid");
  oracle_cmd->add_option("--out", oracle_out, "Output diagram CSV")->required();
  oracle_cmd->add_option("--modes-out", oracle_modes_out, "Output modes CSV (default: OUT.modes.csv)");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Convergence sweep over sample sizes");
  DensityOptions sweep_density;
  EstimatorOptions sweep_opts;
  std::string sweep_n_list, sweep_out, sweep_summary;
  int sweep_trials = 1, sweep_threads = 1, sweep_fine_m = 0;
  std::uint64_t sweep_seed = 0;
  bool sweep_timing = false;
  sweep_density.add(*sweep_cmd, true);
  sweep_opts.add(*sweep_cmd);
  sweep_cmd->add_option("--n-list", sweep_n_list, "Comma-separated sample sizes")->required();
  sweep_cmd->add_option("--trials", sweep_trials, "Trials per sample size");
  sweep_cmd->add_option("--seed", sweep_seed, "Base seed");
  sweep_cmd->add_option("--threads", sweep_threads, "Worker threads");
  sweep_cmd->add_option("--fine-m", sweep_fine_m, "Cells per axis of the oracle grid");
  sweep_cmd->add_option("--out", sweep_out, "Output results CSV")->required();
  sweep_cmd->add_option("--summary", sweep_summary, "Output rate summary JSON (default: OUT.summary.json)");
  sweep_cmd->add_flag("--with-timing", sweep_timing, "Append a wall-time column (not reproducible)");

  // plot
  auto* plot_cmd = app.add_subcommand("plot", "Render diagrams or mode estimates as static SVG");
  std::vector<std::string> plot_in;
  std::string plot_samples, plot_out;
  plot_cmd->add_option("--in", plot_in, "Diagram CSV(s) or one estimate JSON")->required();
  plot_cmd->add_option("--samples", plot_samples, "Samples CSV drawn under a mode overlay");
  plot_cmd->add_option("--out", plot_out, "Output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "persmode: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (sample_cmd->parsed()) {
      if (sample_n < 1) throw UsageError("--n must be at least 1");
      const PointSet pts = sample(sample_density.build(), sample_n, sample_seed);
      io::write_file(sample_out, render([&](std::ostream& s) { io::write_samples_csv(s, pts); }));
    } else if (estimate_cmd->parsed()) {
      const auto spec = estimate_in.spec();
      const EstimatorConfig config = estimate_opts.build(spec);
      const ModeEstimate est = estimate_modes(estimate_in.load(spec), config);
      io::write_file(estimate_out, to_string(io::mode_estimate_to_json(est)));
      out << "k_hat=" << est.k_hat << " threshold=" << io::format_double(est.threshold_used) << "\n";
    } else if (diagram_cmd->parsed()) {
      const auto spec = diagram_in.spec();
      const EstimatorConfig config = diagram_opts.build(spec);
      const PersistenceDiagram d = estimate_config_diagram(diagram_in.load(spec), config);
      io::write_file(diagram_out, render([&](std::ostream& s) { io::write_diagram_csv(s, d); }));
    } else if (bottleneck_cmd->parsed()) {
      std::istringstream a(io::read_file(bottleneck_a)), b(io::read_file(bottleneck_b));
      out << io::format_double(bottleneck(io::read_diagram_csv(a), io::read_diagram_csv(b))) << "\n";
    } else if (oracle_cmd->parsed()) {
      const DensitySpec spec = oracle_density.build();
      const int fine_m = oracle_fine_m > 0 ? oracle_fine_m : default_oracle_cells(spec.dim());
      const OracleDiagram oracle = oracle_diagram(spec, fine_m);
      const OracleModes modes = oracle_modes(spec);
      io::write_file(oracle_out, render([&](std::ostream& s) { io::write_diagram_csv(s, oracle.diagram); }));
      io::write_file(oracle_modes_out.empty() ? oracle_out + ".modes.csv" : oracle_modes_out,
                     render([&](std::ostream& s) { io::write_modes_csv(s, modes.locations, modes.values); }));
      out << "Z=" << io::format_double(spec.normalization()) << " points=" << oracle.diagram.size()
          << " modes=" << modes.locations.size() << "\n";
    } else if (sweep_cmd->parsed()) {
      const DensitySpec spec = sweep_density.build();
      SweepConfig config;
      config.n_list = parse_n_list(sweep_n_list);
      config.trials = sweep_trials;
      config.seed = sweep_seed;
      config.threads = sweep_threads;
      config.fine_m = sweep_fine_m;
      config.estimator = sweep_opts.build(spec);
      if (config.trials < 1) throw UsageError("--trials must be at least 1");
      const auto results = run_sweep(spec, config);
      const RateSummary summary = rate_summary(results);
      io::write_file(sweep_out, render([&](std::ostream& s) { io::write_results_csv(s, results, sweep_timing); }));
      const auto summary_json = io::rate_summary_to_json(summary, spec.name());
      io::write_file(sweep_summary.empty() ? sweep_out + ".summary.json" : sweep_summary, to_string(summary_json));
      for (const auto& p : summary.medians) {
        out << "n=" << p.n << " median_d_b=" << io::format_double(p.median_d_b) << "\n";
      }
      out << "slope=" << io::format_double(summary.slope)
          << " non_increasing=" << (summary.non_increasing ? "true" : "false") << "\n";
    } else if (plot_cmd->parsed()) {
      std::string svg;
      if (plot_in.size() == 1 && plot_in.front().ends_with(".json")) {
        const auto j = nlohmann::json::parse(io::read_file(plot_in.front()));
        const auto& modes = j.at("modes");
        const int d = modes.empty() ? 1 : static_cast<int>(modes.front().at("location").size());
        PointSet loc(static_cast<Eigen::Index>(modes.size()), d);
        for (std::size_t i = 0; i < modes.size(); ++i) {
          const auto coords = modes[i].at("location").get<std::vector<double>>();
          for (int a = 0; a < d; ++a) loc(static_cast<Eigen::Index>(i), a) = coords.at(static_cast<std::size_t>(a));
        }
        PointSet pts(0, d);
        if (!plot_samples.empty()) {
          std::istringstream s(io::read_file(plot_samples));
          pts = io::read_samples_csv(s);
        }
        svg = io::modes_svg(pts, ModeSet(d, std::move(loc)));
      } else {
        std::vector<std::pair<std::string, PersistenceDiagram>> diagrams;
        for (const auto& path : plot_in) {
          std::istringstream s(io::read_file(path));
          diagrams.emplace_back(path, io::read_diagram_csv(s));
        }
        svg = io::diagram_svg(diagrams);
      }
      io::write_file(plot_out, svg);
    }
  } catch (const UsageError& e) {
    err << "persmode: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "persmode: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kSuccess;
}

}  // namespace persmode::cli
