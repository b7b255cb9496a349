#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "mmw/errors.hpp"
#include "mmw/grid.hpp"
#include "mmw/mbvd.hpp"
#include "mmw/metrics.hpp"
#include "mmw/nelder_mead.hpp"
#include "mmw/network.hpp"

namespace mmw {

// Target specification for a shunt-series-shunt ladder. rs/ls are applied to
// every resonator.
struct DesignSpec {
  double fc_target = 0.0;
  double fbw_target = 0.0;
  double z0 = 50.0;
  double oob_min_db = 0.0;
  double k2 = 0.0;
  double q = 0.0;
  double rs = 0.0;
  double ls = 0.0;
  double il_max_db = 0.0;

  friend bool operator==(const DesignSpec&, const DesignSpec&) = default;
};

struct ThicknessScaling {
  double f_ref = 0.0;
  double t_ref = 0.0;
};

// Plate-mode frequency scales inversely with film thickness.
inline double thickness_scale(const ThicknessScaling& scaling, double t_new) {
  if (!(t_new > 0.0) || !std::isfinite(t_new)) throw DomainError("thickness must be positive");
  if (!(scaling.f_ref > 0.0) || !(scaling.t_ref > 0.0)) {
    throw DomainError("thickness scaling needs positive reference frequency and thickness");
  }
  return scaling.f_ref * (scaling.t_ref / t_new);
}

// Feasibility tolerances on the evaluated design.
inline constexpr double kFcTolerance = 0.005;
inline constexpr double kFbwTolerance = 0.015;

inline constexpr int kSynthesisEvaluations = 2000;
inline constexpr std::size_t kSynthesisGridPoints = 1601;
inline constexpr double kSynthesisSpanLo = 0.5;
inline constexpr double kSynthesisSpanHi = 1.8;

struct SynthesisResult {
  LadderDesign design;
  std::optional<FilterMetrics> metrics;  // empty when no passband can be extracted
  bool feasible = false;
  double objective = 0.0;
  int evaluations = 0;
};

inline FrequencyGrid synthesis_grid(const DesignSpec& spec) {
  return FrequencyGrid::linear(kSynthesisSpanLo * spec.fc_target, kSynthesisSpanHi * spec.fc_target,
                               kSynthesisGridPoints);
}

inline void validate(const DesignSpec& spec) {
  if (!(spec.k2 > 0.0) || !(spec.q > 0.0)) {
    throw InfeasibleSpecError("spec needs k2 > 0 and q > 0");
  }
  if (!(spec.k2 < kMaxCoupling)) throw InfeasibleCouplingError("spec k2 is not below pi^2/8");
  const double positive[] = {spec.fc_target, spec.fbw_target, spec.z0, spec.il_max_db};
  for (double v : positive) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError("spec needs positive fc_target, fbw_target, z0 and il_max_db");
    }
  }
  const double non_negative[] = {spec.oob_min_db, spec.rs, spec.ls};
  for (double v : non_negative) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw DomainError("spec needs non-negative oob_min_db, rs and ls");
    }
  }
}

// Upper bound on the bandwidth a coupling coefficient can plausibly support.
inline bool within_coupling_bound(const DesignSpec& spec) {
  return spec.fbw_target < 2.0 * (8.0 / (kPi * kPi)) * spec.k2;
}

inline bool meets_spec(const FilterMetrics& m, const DesignSpec& spec) {
  return m.il_db <= spec.il_max_db &&
         std::abs(m.fc - spec.fc_target) / spec.fc_target <= kFcTolerance &&
         std::abs(m.fbw3 - spec.fbw_target) <= kFbwTolerance && m.oob_rejection_db >= spec.oob_min_db;
}

// Ladder built from the four search coordinates (fs_series, fs_shunt, c0_series, c0_shunt).
inline LadderDesign ladder_from_coordinates(const DesignSpec& spec, double fs_series, double fs_shunt,
                                            double c0_series, double c0_shunt) {
  const MbvdParams series = mbvd_from_targets(fs_series, spec.k2, c0_series, spec.q, spec.rs, spec.ls);
  const MbvdParams shunt = mbvd_from_targets(fs_shunt, spec.k2, c0_shunt, spec.q, spec.rs, spec.ls);
  return make_shunt_series_shunt(series, shunt, spec.z0);
}

inline std::optional<FilterMetrics> evaluate_design(const LadderDesign& design,
                                                    const FrequencyGrid& grid) {
  try {
    return passband_metrics(build_ladder_response(design, grid).s21(), kDefaultGuard);
  } catch (const Error&) {
    return std::nullopt;
  }
}

inline double synthesis_objective(const FilterMetrics& m, const DesignSpec& spec) {
  return 10.0 * std::max(0.0, m.il_db - spec.il_max_db) + 5.0 * std::abs(m.fbw3 - spec.fbw_target) +
         2.0 * std::max(0.0, spec.oob_min_db - m.oob_rejection_db) +
         20.0 * std::abs(m.fc - spec.fc_target) / spec.fc_target;
}

inline SynthesisResult synthesize_ladder(const DesignSpec& spec) {
  validate(spec);
  const FrequencyGrid grid = synthesis_grid(spec);

  constexpr double kUnscorable = 1e3;
  constexpr double kOutOfDomain = 1e6;
  auto objective = [&](const std::vector<double>& x) {
    for (double v : x) {
      if (!(v > 0.0) || !std::isfinite(v)) return kOutOfDomain;
    }
    const auto metrics = evaluate_design(ladder_from_coordinates(spec, x[0], x[1], x[2], x[3]), grid);
    return metrics ? synthesis_objective(*metrics, spec) : kUnscorable;
  };

  // Series resonance at the center; shunt anti-resonance at the center.
  const double ratio = 1.0 / (1.0 - spec.k2 / kMaxCoupling) - 1.0;
  const double c0_shunt = 1.0 / (2.0 * kPi * spec.fc_target * spec.z0);
  const std::vector<double> x0 = {spec.fc_target, spec.fc_target / std::sqrt(1.0 + ratio),
                                  0.5 * c0_shunt, c0_shunt};

  NelderMeadOptions nm;
  nm.max_evaluations = kSynthesisEvaluations;
  const NelderMeadResult best = nelder_mead(objective, x0, nm);

  SynthesisResult out;
  const auto& x = best.x;
  out.design = ladder_from_coordinates(spec, x[0], x[1], x[2], x[3]);
  out.metrics = evaluate_design(out.design, grid);
  out.objective = best.value;
  out.evaluations = best.evaluations;
  out.feasible = out.metrics && meets_spec(*out.metrics, spec) && within_coupling_bound(spec);
  return out;
}

}  // namespace mmw
