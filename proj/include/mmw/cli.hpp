#pragma once

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mmw/csv.hpp"
#include "mmw/design_file.hpp"
#include "mmw/errors.hpp"
#include "mmw/fitting.hpp"
#include "mmw/metrics.hpp"
#include "mmw/network.hpp"
#include "mmw/svg.hpp"
#include "mmw/synthesis.hpp"
#include "mmw/text.hpp"
#include "mmw/touchstone.hpp"

// Command-line front end. Exit status: 0 success, 1 domain/data error with a
// one-line diagnostic, 2 usage error with usage text.

namespace mmw::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

namespace fs = std::filesystem;

// Parses "start:stop:count".
inline FrequencyGrid parse_grid(const std::string& spec) {
  const auto a = spec.find(':');
  const auto b = a == std::string::npos ? std::string::npos : spec.find(':', a + 1);
  if (b == std::string::npos || spec.find(':', b + 1) != std::string::npos) {
    throw UsageError("grid must be start:stop:count, got '" + spec + "'");
  }
  const auto start = text::parse_double(std::string_view(spec).substr(0, a));
  const auto stop = text::parse_double(std::string_view(spec).substr(a + 1, b - a - 1));
  const auto count = text::parse_double(std::string_view(spec).substr(b + 1));
  if (!start || !stop || !count || *count != std::floor(*count)) {
    throw UsageError("grid must be start:stop:count with numeric fields, got '" + spec + "'");
  }
  if (*count < 2 || !(*start < *stop) || !(*start > 0.0)) {
    throw UsageError("grid needs 0 < start < stop and count >= 2, got '" + spec + "'");
  }
  return FrequencyGrid::linear(*start, *stop, static_cast<std::size_t>(*count));
}

// Parses "a:b:n" into n evenly spaced values from a to b (n = 1 gives a).
inline std::vector<double> parse_range(const std::string& spec) {
  const auto a = spec.find(':');
  const auto b = a == std::string::npos ? std::string::npos : spec.find(':', a + 1);
  if (b == std::string::npos || spec.find(':', b + 1) != std::string::npos) {
    throw UsageError("range must be a:b:n, got '" + spec + "'");
  }
  const auto lo = text::parse_double(std::string_view(spec).substr(0, a));
  const auto hi = text::parse_double(std::string_view(spec).substr(a + 1, b - a - 1));
  const auto count = text::parse_double(std::string_view(spec).substr(b + 1));
  if (!lo || !hi || !count || *count < 1 || *count != std::floor(*count)) {
    throw UsageError("range must be a:b:n with n >= 1, got '" + spec + "'");
  }
  const auto n = static_cast<std::size_t>(*count);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = n == 1 ? *lo : *lo + (*hi - *lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return v;
}

inline void check_input(const std::string& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw UsageError("input file '" + path + "' does not exist");
}

inline void check_output(const std::string& path) {
  const fs::path p(path);
  std::error_code ec;
  if (fs::is_directory(p, ec)) throw UsageError("output path '" + path + "' is a directory");
  const fs::path parent = p.parent_path();
  if (!parent.empty() && !fs::is_directory(parent, ec)) {
    throw UsageError("output directory '" + parent.string() + "' does not exist");
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Collects every output of a command and publishes them together: each file
// goes to a temporary sibling first, then all are renamed into place.
class OutputSet {
 public:
  void add(std::string path, std::string content) { files_.emplace_back(std::move(path), std::move(content)); }

  void commit() {
    std::vector<fs::path> temps;
    auto cleanup = [&] {
      std::error_code ec;
      for (const auto& t : temps) fs::remove(t, ec);
    };
    for (const auto& [path, content] : files_) {
      fs::path tmp = path + ".tmp";
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      temps.push_back(tmp);
      if (!out || !(out << content) || !(out.flush())) {
        cleanup();
        throw IoError("cannot write '" + path + "'");
      }
    }
    for (std::size_t i = 0; i < files_.size(); ++i) {
      std::error_code ec;
      fs::rename(temps[i], files_[i].first, ec);
      if (ec) {
        cleanup();
        throw IoError("cannot move output into '" + files_[i].first + "': " + ec.message());
      }
    }
  }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

inline DataFormat parse_format(const std::string& s) {
  const std::string u = text::upper(s);
  if (u == "RI") return DataFormat::RI;
  if (u == "MA") return DataFormat::MA;
  if (u == "DB") return DataFormat::DB;
  throw UsageError("format must be RI, MA or DB");
}

inline FrequencyUnit parse_unit(const std::string& s) {
  const std::string u = text::upper(s);
  if (u == "HZ") return FrequencyUnit::Hz;
  if (u == "KHZ") return FrequencyUnit::kHz;
  if (u == "MHZ") return FrequencyUnit::MHz;
  if (u == "GHZ") return FrequencyUnit::GHz;
  throw UsageError("unit must be Hz, kHz, MHz or GHz");
}

struct SimulateArgs {
  std::string design, grid, out, metrics, csv, svg, resonator, format = "RI", unit = "Hz";
  double guard = kDefaultGuard;
  std::optional<double> z0;
};

struct FitArgs {
  std::string input, out, report, section = "series", weight = "inverse-magnitude";
  int max_iterations = 200;
  double tolerance = 1e-10;
  bool fit_r0 = false;
};

struct SynthesizeArgs {
  std::string spec, out, s2p, grid, metrics;
  bool strict = false;
};

struct MetricsArgs {
  std::string input, out, svg;
  double guard = kDefaultGuard;
};

struct SweepArgs {
  std::string design, param, range, grid, out;
  double guard = kDefaultGuard;
};

inline int run_simulate(const SimulateArgs& a, std::ostream& /*out*/, std::ostream& /*err*/) {
  check_input(a.design);
  for (const auto* p : {&a.out, &a.metrics, &a.csv, &a.svg}) {
    if (!p->empty()) check_output(*p);
  }
  const FrequencyGrid grid = parse_grid(a.grid);
  const DataFormat format = parse_format(a.format);
  const FrequencyUnit unit = parse_unit(a.unit);

  const DesignDocument doc = parse_design_document(read_file(a.design));
  OutputSet outputs;
  if (!a.resonator.empty() || !doc.filter) {
    if (!a.metrics.empty() || !a.svg.empty()) {
      throw UsageError("--metrics and --svg need a two-port ([filter]) simulation");
    }
    const MbvdParams p = read_resonator(read_file(a.design), a.resonator);
    const double z0 = a.z0 ? *a.z0 : (doc.filter ? doc.filter->z0 : 50.0);
    if (!(z0 > 0.0)) throw DomainError("reference impedance must be > 0");
    const ComplexCurve y = resonator_admittance(p, grid);
    std::vector<Complex> s11(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) s11[i] = admittance_to_reflection(y[i], z0);
    const ComplexCurve reflection(grid, std::move(s11));
    outputs.add(a.out, write_touchstone(reflection, TouchstoneHeader{unit, format, z0}));
    if (!a.csv.empty()) outputs.add(a.csv, write_curve_csv(reflection));
  } else {
    if (a.z0) throw UsageError("--z0 applies to one-port simulation; two-port uses [filter] z0");
    const LadderDesign design = to_ladder(doc);
    const SParameterBlock s = build_ladder_response(design, grid);
    outputs.add(a.out, write_touchstone(s, unit, format));
    const ComplexCurve s21 = s.s21();
    if (!a.metrics.empty()) outputs.add(a.metrics, write_metrics_csv(passband_metrics(s21, a.guard)));
    if (!a.csv.empty()) outputs.add(a.csv, write_curve_csv(s21));
    if (!a.svg.empty()) outputs.add(a.svg, write_s21_svg(s21));
  }
  outputs.commit();
  return kExitOk;
}

inline int run_fit(const FitArgs& a, std::ostream& /*out*/, std::ostream& err) {
  check_input(a.input);
  check_output(a.out);
  if (!a.report.empty()) check_output(a.report);
  if (a.section != "series" && a.section != "shunt") throw UsageError("--section must be series or shunt");
  FitOptions opts;
  if (a.weight == "inverse-magnitude") {
    opts.weight_mode = WeightMode::InverseMagnitude;
  } else if (a.weight == "uniform") {
    opts.weight_mode = WeightMode::Uniform;
  } else {
    throw UsageError("--weight must be inverse-magnitude or uniform");
  }
  opts.max_iterations = a.max_iterations;
  opts.relative_tolerance = a.tolerance;
  opts.fit_r0 = a.fit_r0;

  const OnePortData data = read_touchstone_1port(read_file(a.input));
  const double z0 = data.header.reference_resistance;
  std::vector<Complex> y(data.s11.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = reflection_to_admittance(data.s11[i], z0);
  const ComplexCurve admittance(data.s11.grid(), std::move(y));

  MbvdParams init = initial_guess(admittance);
  if (opts.fit_r0 && init.r0 == 0.0) init.r0 = 0.1;
  const FitResult fit = fit_mbvd(admittance, init, opts);

  OutputSet outputs;
  outputs.add(a.out, write_resonator(fit.params, a.section));
  if (!a.report.empty()) outputs.add(a.report, write_fit_report_csv(fit));
  outputs.commit();
  if (!fit.converged) err << "fit: did not converge (residual " << text::format_double(fit.residual_norm) << ")\n";
  return kExitOk;
}

inline int run_synthesize(const SynthesizeArgs& a, std::ostream& /*out*/, std::ostream& err) {
  check_input(a.spec);
  check_output(a.out);
  if (!a.s2p.empty()) check_output(a.s2p);
  if (!a.metrics.empty()) check_output(a.metrics);
  if (!a.s2p.empty() && a.grid.empty()) throw UsageError("--s2p needs --grid");
  std::optional<FrequencyGrid> grid;
  if (!a.grid.empty()) grid = parse_grid(a.grid);

  const DesignSpec spec = read_spec(read_file(a.spec));
  const SynthesisResult result = synthesize_ladder(spec);
  if (a.strict && !result.feasible) throw DomainError("synthesis: infeasible specification");

  OutputSet outputs;
  outputs.add(a.out, write_design(result.design));
  if (!a.s2p.empty()) outputs.add(a.s2p, write_touchstone(build_ladder_response(result.design, *grid)));
  if (!a.metrics.empty()) {
    if (!result.metrics) throw DomainError("synthesized design has no extractable passband");
    outputs.add(a.metrics, write_metrics_csv(*result.metrics));
  }
  outputs.commit();
  err << "synthesis: " << (result.feasible ? "feasible" : "infeasible") << "\n";
  return kExitOk;
}

inline int run_metrics(const MetricsArgs& a, std::ostream& out, std::ostream& /*err*/) {
  check_input(a.input);
  if (!a.out.empty()) check_output(a.out);
  if (!a.svg.empty()) check_output(a.svg);
  const TwoPortData data = read_touchstone_2port(read_file(a.input));
  const ComplexCurve s21 = data.s.s21();
  const std::string csv = write_metrics_csv(passband_metrics(s21, a.guard));
  OutputSet outputs;
  if (!a.out.empty()) outputs.add(a.out, csv);
  if (!a.svg.empty()) outputs.add(a.svg, write_s21_svg(s21));
  outputs.commit();
  if (a.out.empty()) out << csv;
  return kExitOk;
}

inline int run_sweep(const SweepArgs& a, std::ostream& /*out*/, std::ostream& /*err*/) {
  check_input(a.design);
  check_output(a.out);
  const FrequencyGrid grid = parse_grid(a.grid);
  const std::vector<double> values = parse_range(a.range);
  const DesignDocument base = parse_design_document(read_file(a.design));
  {
    DesignDocument probe = base;
    set_document_value(probe, a.param, 0.0);
  }
  std::string csv = sweep_csv_header();
  for (double v : values) {
    DesignDocument doc = base;
    set_document_value(doc, a.param, v);
    try {
      const FilterMetrics m = passband_metrics(build_ladder_response(to_ladder(doc), grid).s21(), a.guard);
      csv += sweep_csv_row(v, m, {});
    } catch (const Error& e) {
      csv += sweep_csv_row(v, FilterMetrics{}, e.what());
    }
  }
  OutputSet outputs;
  outputs.add(a.out, std::move(csv));
  outputs.commit();
  return kExitOk;
}

inline int dispatch(int argc, const char* const* argv, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  CLI::App app{"Modified-MBVD acoustic resonator and ladder filter toolkit", "mmwfilter"};
  app.require_subcommand(1, 1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Evaluate a design file on a frequency grid");
  simulate->add_option("--design", sim.design, "Design file (key = value sections)")->required();
  simulate->add_option("--grid", sim.grid, "Frequency grid start:stop:count in Hz")->required();
  simulate->add_option("--out", sim.out, "Touchstone output (.s2p for a ladder, .s1p for one resonator)")->required();
  simulate->add_option("--metrics", sim.metrics, "Write filter metrics CSV");
  simulate->add_option("--csv", sim.csv, "Write the S21 (or one-port S11) curve as CSV");
  simulate->add_option("--svg", sim.svg, "Write an |S21| plot");
  simulate->add_option("--resonator", sim.resonator, "Simulate one resonator section as a one-port");
  simulate->add_option("--z0", sim.z0, "One-port reference impedance in ohm");
  simulate->add_option("--guard", sim.guard, "Stopband guard as a fraction of the 3-dB edges");
  simulate->add_option("--format", sim.format, "Touchstone data format: RI, MA or DB");
  simulate->add_option("--unit", sim.unit, "Touchstone frequency unit: Hz, kHz, MHz or GHz");

  FitArgs fit;
  auto* fitc = app.add_subcommand("fit", "Fit modified-MBVD parameters to a one-port s1p");
  fitc->add_option("--input", fit.input, "Measured or synthetic .s1p")->required();
  fitc->add_option("--out", fit.out, "Fitted resonator design file")->required();
  fitc->add_option("--report", fit.report, "Fit report CSV");
  fitc->add_option("--section", fit.section, "Section name for the fitted resonator (series|shunt)");
  fitc->add_option("--weight", fit.weight, "Residual weighting: inverse-magnitude or uniform");
  fitc->add_option("--max-iterations", fit.max_iterations, "Iteration cap");
  fitc->add_option("--tolerance", fit.tolerance, "Relative residual change for convergence");
  fitc->add_flag("--fit-r0", fit.fit_r0, "Also fit the static-branch resistance r0");

  SynthesizeArgs syn;
  auto* synth = app.add_subcommand("synthesize", "Synthesize a shunt-series-shunt ladder from a spec file");
  synth->add_option("--spec", syn.spec, "Spec file with a [spec] section")->required();
  synth->add_option("--out", syn.out, "Design file output")->required();
  synth->add_option("--s2p", syn.s2p, "Touchstone output of the design (needs --grid)");
  synth->add_option("--grid", syn.grid, "Frequency grid start:stop:count in Hz for --s2p");
  synth->add_option("--metrics", syn.metrics, "Metrics CSV of the design on the synthesis grid");
  synth->add_flag("--strict", syn.strict, "Treat an infeasible result as an error");

  MetricsArgs met;
  auto* metrics = app.add_subcommand("metrics", "Extract filter metrics from a two-port s2p");
  metrics->add_option("--input", met.input, "Two-port .s2p")->required();
  metrics->add_option("--out", met.out, "Metrics CSV (stdout when omitted)");
  metrics->add_option("--svg", met.svg, "Write an |S21| plot");
  metrics->add_option("--guard", met.guard, "Stopband guard as a fraction of the 3-dB edges");

  SweepArgs swp;
  auto* sweep = app.add_subcommand("sweep", "Sweep one design value and tabulate metrics");
  sweep->add_option("--design", swp.design, "Design file")->required();
  sweep->add_option("--param", swp.param, "Value to sweep as section.key (e.g. series.ls)")->required();
  sweep->add_option("--range", swp.range, "Sweep values a:b:n")->required();
  sweep->add_option("--grid", swp.grid, "Frequency grid start:stop:count in Hz")->required();
  sweep->add_option("--out", swp.out, "Sweep CSV output")->required();
  sweep->add_option("--guard", swp.guard, "Stopband guard as a fraction of the 3-dB edges");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    CLI::App* target = &app;
    for (auto* sub : app.get_subcommands()) target = sub;
    err << target->help();
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim, out, err);
    if (fitc->parsed()) return run_fit(fit, out, err);
    if (synth->parsed()) return run_synthesize(syn, out, err);
    if (metrics->parsed()) return run_metrics(met, out, err);
    return run_sweep(swp, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    CLI::App* target = &app;
    for (auto* sub : app.get_subcommands()) target = sub;
    err << target->help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
}

inline int dispatch(const std::vector<std::string>& args, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  std::vector<const char*> argv;
  argv.push_back("mmwfilter");
  for (const auto& a : args) argv.push_back(a.c_str());
  return dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace mmw::cli
