// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mmw/mmw.hpp"
#include "oracles.hpp"

using namespace mmw;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(const char* id, const std::string& title, bool ok, const std::string& detail) {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << id << " " << title << ": " << detail << "\n";
  if (!ok) ++failures;
}

// Runs a criterion body; an escaped exception counts as a failure.
void criterion(const char* id, const std::string& title, const std::function<bool(std::ostringstream&)>& body) {
  std::ostringstream detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << "exception: " << e.what();
  }
  report(id, title, ok, detail.str());
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

DesignSpec k_band_spec() {
  DesignSpec s;
  s.fc_target = 23.5e9;
  s.fbw_target = 0.16;
  s.z0 = 50.0;
  s.oob_min_db = 12.0;
  s.k2 = 0.46;
  s.q = 50.0;
  s.il_max_db = 1.6;
  return s;
}

bool is_shunt_series_shunt(const LadderDesign& d) {
  return d.elements.size() == 3 && d.elements[0].kind == ElementKind::Shunt &&
         d.elements[1].kind == ElementKind::Series && d.elements[2].kind == ElementKind::Shunt &&
         d.elements[0].resonator == d.elements[2].resonator;
}

bool ac1(std::ostringstream& d) {
  const auto t0 = std::chrono::steady_clock::now();
  const SynthesisResult r = synthesize_ladder(k_band_spec());
  const double t = seconds_since(t0);
  if (!r.metrics) {
    d << "no metrics";
    return false;
  }
  const FilterMetrics& m = *r.metrics;
  d << "IL " << m.il_db << " dB, fc " << m.fc / 1e9 << " GHz, FBW " << 100 * m.fbw3 << "%, OoB "
    << m.oob_rejection_db << " dB, " << t << " s";
  return r.feasible && is_shunt_series_shunt(r.design) && std::abs(m.il_db - 1.47) <= 0.5 &&
         rel(m.fc, 23.5e9) <= 0.005 && std::abs(m.fbw3 - 0.16) <= 0.015 && m.oob_rejection_db >= 12.0 &&
         t < 60.0;
}

bool ac2(std::ostringstream& d) {
  // Parasitic set: 1 ohm and 20 pH routing on every resonator.
  DesignSpec s;
  s.fc_target = 23.5e9;
  s.fbw_target = 0.18;
  s.z0 = 50.0;
  s.oob_min_db = 10.0;
  s.k2 = 0.42;
  s.q = 40.0;
  s.rs = 1.0;
  s.ls = 20e-12;
  s.il_max_db = 3.0;
  const SynthesisResult r = synthesize_ladder(s);
  if (!r.metrics) {
    d << "no metrics";
    return false;
  }
  d << "IL " << r.metrics->il_db << " dB, FBW " << 100 * r.metrics->fbw3 << "%";
  return is_shunt_series_shunt(r.design) && r.metrics->fbw3 >= 0.15 && r.metrics->il_db <= 3.0;
}

bool ac3(std::ostringstream& d) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_fp = 0.0, worst_trip = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double fs = std::pow(10.0, 9 + 2 * u(rng));
    const double k2 = 0.01 + 0.89 * u(rng);
    const double c0 = std::pow(10.0, -15 + 2 * u(rng));
    const double q = 5 + 1000 * u(rng);
    const MbvdParams p = mbvd_from_targets(fs, k2, c0, q);

    // Lossless admittance is purely imaginary and crosses zero at fp.
    const double root = oracle::bisect(
        [&](double f) { return oracle::mbvd_admittance(f, 0.0, p.lm, p.cm, p.c0).imag(); },
        fs * (1 + 1e-9), 3 * fs);
    worst_fp = std::max(worst_fp, rel(antiresonance(p), root));
    worst_fp = std::max(worst_fp, rel(antiresonance(p), series_resonance(p) * std::sqrt(1 + p.cm / p.c0)));

    const double ws = 2 * oracle::kPi * series_resonance(p);
    worst_trip = std::max({worst_trip, rel(series_resonance(p), fs), rel(coupling_k2(p), k2),
                           rel(ws * p.lm / p.rm, q), rel(p.c0, c0)});
  }
  d << "fp worst " << worst_fp << ", round trip worst " << worst_trip;
  return worst_fp <= 1e-9 && worst_trip <= 1e-12;
}

bool ac4(std::ostringstream& d) {
  MbvdParams truth;
  truth.rm = 7.712;
  truth.lm = 2.4545e-9;
  truth.cm = 25.80e-15;
  truth.c0 = 50e-15;
  truth.rs = 1.0;
  truth.ls = 100e-12;
  const FrequencyGrid grid = FrequencyGrid::linear(2e9, 100e9, 2001);
  const ComplexCurve clean = resonator_admittance(truth, grid);

  auto worst = [&](const MbvdParams& p) {
    return std::max({rel(p.rm, truth.rm), rel(p.lm, truth.lm), rel(p.cm, truth.cm), rel(p.c0, truth.c0),
                     rel(p.rs, truth.rs), rel(p.ls, truth.ls)});
  };

  double slowest = 0.0;
  auto t0 = std::chrono::steady_clock::now();
  const FitResult exact = fit_mbvd(clean, initial_guess(clean));
  slowest = std::max(slowest, seconds_since(t0));
  const double noiseless = worst(exact.params);

  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<Complex> v(clean.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = clean[i] * (1.0 + 0.01 * Complex(n(rng), n(rng)) / std::sqrt(2.0));
  }
  const ComplexCurve noisy(grid, std::move(v));
  t0 = std::chrono::steady_clock::now();
  const FitResult rough = fit_mbvd(noisy, initial_guess(noisy));
  slowest = std::max(slowest, seconds_since(t0));
  const double noisy_err = worst(rough.params);
  const double k2_err = std::abs(coupling_k2(rough.params) - coupling_k2(truth));

  d << "noiseless worst " << 100 * noiseless << "%, noisy worst " << 100 * noisy_err << "%, k2 off "
    << 100 * k2_err << " pt, slowest " << slowest << " s";
  return noiseless <= 1e-3 && noisy_err <= 0.02 && k2_err <= 0.01 && slowest < 5.0;
}

LadderDesign random_ladder(std::mt19937_64& rng, bool lossless) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double q = lossless ? std::numeric_limits<double>::infinity() : 10 + 200 * u(rng);
  auto make = [&](double fs) {
    MbvdParams p = mbvd_from_targets(fs, 0.05 + 1.0 * u(rng), 20e-15 + 300e-15 * u(rng), q,
                                     lossless ? 0.0 : 3 * u(rng), 150e-12 * u(rng));
    if (!lossless) p.r0 = u(rng);
    return p;
  };
  LadderDesign d;
  d.resonators["series"] = make(15e9 + 20e9 * u(rng));
  d.resonators["shunt"] = make(15e9 + 20e9 * u(rng));
  const int count = 1 + static_cast<int>(5 * u(rng));
  for (int i = 0; i < count; ++i) {
    const bool series = u(rng) < 0.5;
    d.elements.push_back({series ? ElementKind::Series : ElementKind::Shunt, series ? "series" : "shunt"});
  }
  d.z0 = 25 + 50 * u(rng);
  return d;
}

bool ac5(std::ostringstream& d) {
  std::mt19937_64 rng(50);
  const FrequencyGrid grid = FrequencyGrid::logarithmic(1e9, 80e9, 800);
  double recip = 0.0, sigma = 0.0, energy = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const bool lossless = trial % 5 == 0;
    const SParameterBlock s = build_ladder_response(random_ladder(rng, lossless), grid);
    for (const Matrix2& m : s.matrices()) {
      recip = std::max(recip, std::abs(m.m12 - m.m21) / std::abs(m.m21));
      sigma = std::max(sigma, max_singular_value(m));
      if (lossless) energy = std::max(energy, std::abs(std::norm(m.m11) + std::norm(m.m21) - 1.0));
    }
  }
  d << "reciprocity " << recip << ", max sigma " << sigma << ", lossless energy error " << energy;
  return recip <= 1e-12 && sigma <= 1 + 1e-6 && energy <= 1e-9;
}

bool ac6(std::ostringstream& d) {
  const double f0 = 10e9, q = 10.0;
  const FrequencyGrid grid = FrequencyGrid::linear(2e9, 20e9, 16001);
  std::vector<Complex> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = oracle::single_pole(grid[i], f0, q);
  const FilterMetrics m = passband_metrics(ComplexCurve(grid, std::move(v)));
  const double bw_err = rel(m.bw3_hz, 1e9);
  const double sf_err = rel(m.shape_factor20, std::sqrt(99.0));
  d << "bw3 " << m.bw3_hz / 1e9 << " GHz (" << 100 * bw_err << "%), SF20 " << m.shape_factor20 << " ("
    << 100 * sf_err << "%)";
  return bw_err <= 1e-4 && sf_err <= 5e-4;
}

bool ac7(std::ostringstream& d) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double ts_worst = 0.0, cross_worst = 0.0;
  bool designs_ok = true;
  auto cmp = [](const SParameterBlock& a, const SParameterBlock& b) {
    double w = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      w = std::max(w, rel(a.grid()[i], b.grid()[i]));
      for (auto [x, y] : {std::pair{a[i].m11, b[i].m11}, std::pair{a[i].m12, b[i].m12},
                          std::pair{a[i].m21, b[i].m21}, std::pair{a[i].m22, b[i].m22}}) {
        w = std::max(w, std::abs(x - y) / std::abs(y));
      }
    }
    return w;
  };
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> hz;
    double f = 1e9 * (1 + u(rng));
    for (int i = 0; i < 20; ++i) hz.push_back(f += 1e8 * (0.1 + u(rng)));
    std::vector<Matrix2> s(hz.size());
    auto rnd = [&] { return std::polar(1e-3 + u(rng), oracle::kPi * (2 * u(rng) - 1)); };
    for (auto& m : s) m = {rnd(), rnd(), rnd(), rnd()};
    const SParameterBlock block(FrequencyGrid(hz), s, 10 + 90 * u(rng));
    std::vector<SParameterBlock> back;
    for (DataFormat fmt : {DataFormat::RI, DataFormat::MA, DataFormat::DB}) {
      back.push_back(read_touchstone_2port(write_touchstone(block, FrequencyUnit::GHz, fmt)).s);
      ts_worst = std::max(ts_worst, cmp(back.back(), block));
    }
    cross_worst = std::max({cross_worst, cmp(back[1], back[0]), cmp(back[2], back[0])});

    const LadderDesign design = random_ladder(rng, trial % 4 == 0);
    designs_ok = designs_ok && read_design(write_design(design)) == design;
  }
  d << "touchstone worst " << ts_worst << ", DB/MA vs RI worst " << cross_worst << ", design files "
    << (designs_ok ? "identical" : "differ");
  return ts_worst <= 1e-12 && cross_worst <= 1e-12 && designs_ok;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ac8(std::ostringstream& d) {
  const std::string cli = MMW_CLI_PATH;
  const std::string samples = MMW_SAMPLES_DIR;
  const fs::path root = fs::temp_directory_path() / "mmw_acceptance_cli";
  fs::remove_all(root);

  auto q = [](const fs::path& p) { return "\"" + p.string() + "\""; };
  const std::vector<std::pair<std::string, std::vector<std::string>>> commands = {
      {"simulate --design " + q(samples + "/k_band_ladder.kv") +
           " --grid 12e9:40e9:1401 --out @/f.s2p --metrics @/m.csv --csv @/c.csv --svg @/p.svg",
       {"f.s2p", "m.csv", "c.csv", "p.svg"}},
      {"simulate --design " + q(samples + "/resonator.kv") + " --grid 2e9:100e9:2001 --out @/r.s1p",
       {"r.s1p"}},
      {"fit --input @/r.s1p --out @/fit.kv --report @/fit.csv", {"fit.kv", "fit.csv"}},
      {"synthesize --spec " + q(samples + "/k_band_spec.kv") +
           " --out @/d.kv --s2p @/d.s2p --grid 12e9:40e9:1401 --metrics @/dm.csv",
       {"d.kv", "d.s2p", "dm.csv"}},
      {"metrics --input @/f.s2p --out @/mm.csv --svg @/mm.svg", {"mm.csv", "mm.svg"}},
      {"metrics --input @/f.s2p > @/stdout.csv", {"stdout.csv"}},
      {"sweep --design " + q(samples + "/k_band_ladder.kv") +
           " --param shunt.c0 --range 1.5e-13:2.5e-13:5 --grid 12e9:40e9:1401 --out @/sweep.csv",
       {"sweep.csv"}},
  };

  const int runs = 3;
  std::vector<fs::path> dirs;
  for (int r = 0; r < runs; ++r) {
    const fs::path dir = root / ("run" + std::to_string(r));
    fs::create_directories(dir);
    dirs.push_back(dir);
    for (const auto& [args, files] : commands) {
      std::string line = args;
      for (std::size_t at; (at = line.find('@')) != std::string::npos;) line.replace(at, 1, dir.string());
      const int rc = std::system((q(cli) + " " + line + " 2>" + q(dir / "stderr.txt")).c_str());
      if (rc != 0) {
        d << "exit status " << rc << " for: " << args;
        return false;
      }
    }
  }
  std::size_t compared = 0;
  for (const auto& [args, files] : commands) {
    for (const auto& f : files) {
      const std::string first = slurp(dirs[0] / f);
      if (first.empty()) {
        d << f << " is empty";
        return false;
      }
      for (int r = 1; r < runs; ++r) {
        if (slurp(dirs[r] / f) != first) {
          d << f << " differs between runs";
          return false;
        }
        ++compared;
      }
    }
  }
  fs::remove_all(root);
  d << compared << " output comparisons over " << runs << " runs of 5 subcommands, all byte-identical";
  return true;
}

}  // namespace

int main() {
  std::cout.precision(6);
  criterion("AC1", "K-band ladder synthesis", ac1);
  criterion("AC2", "wide-band design with routing parasitics", ac2);
  criterion("AC3", "resonator identities", ac3);
  criterion("AC4", "fit round trip", ac4);
  criterion("AC5", "network reciprocity and passivity", ac5);
  criterion("AC6", "metrics on a single-pole response", ac6);
  criterion("AC7", "format round trips", ac7);
  criterion("AC8", "CLI determinism", ac8);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
