#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "mmw/errors.hpp"
#include "mmw/extremum.hpp"
#include "mmw/grid.hpp"

namespace mmw {

// Modified mmWave MBVD resonator: series motional branch (rm, lm, cm) in
// parallel with the static branch (r0 + c0), the pair fed through the routing
// parasitics (rs + ls). SI units throughout.
struct MbvdParams {
  double rm = 0.0;
  double lm = 0.0;
  double cm = 0.0;
  double c0 = 0.0;
  double rs = 0.0;
  double ls = 0.0;
  double r0 = 0.0;

  friend bool operator==(const MbvdParams&, const MbvdParams&) = default;
};

inline void validate(const MbvdParams& p) {
  const double all[] = {p.rm, p.lm, p.cm, p.c0, p.rs, p.ls, p.r0};
  for (double v : all) {
    if (!std::isfinite(v)) throw DomainError("MBVD parameter is not finite");
  }
  if (!(p.lm > 0.0) || !(p.cm > 0.0) || !(p.c0 > 0.0)) {
    throw DomainError("MBVD parameters need lm > 0, cm > 0, c0 > 0");
  }
  if (p.rm < 0.0 || p.rs < 0.0 || p.ls < 0.0 || p.r0 < 0.0) {
    throw DomainError("MBVD parameters need rm, rs, ls, r0 >= 0");
  }
}

// Quality factor that may be unbounded for a lossless network.
struct QFactor {
  double value = std::numeric_limits<double>::infinity();
  bool unbounded = true;

  static QFactor bounded(double q) { return {q, false}; }
  static QFactor infinite() { return {}; }
};

struct ResonatorSummary {
  double fs = 0.0;
  double fp = 0.0;
  double f_perceived = 0.0;
  double k2 = 0.0;
  QFactor q_antires;
};

namespace detail {

inline Complex admittance_unchecked(const MbvdParams& p, double f) {
  const double w = 2.0 * kPi * f;
  const Complex j{0.0, 1.0};
  const Complex y_motional = 1.0 / (p.rm + j * w * p.lm + 1.0 / (j * w * p.cm));
  const Complex y_static = 1.0 / (p.r0 + 1.0 / (j * w * p.c0));
  return 1.0 / (p.rs + j * w * p.ls + 1.0 / (y_motional + y_static));
}

}  // namespace detail

inline Complex admittance_at(const MbvdParams& p, double f) {
  validate(p);
  if (!std::isfinite(f) || !(f > 0.0)) throw DomainError("admittance needs a positive frequency");
  return detail::admittance_unchecked(p, f);
}

inline ComplexCurve resonator_admittance(const MbvdParams& p, const FrequencyGrid& grid) {
  validate(p);
  std::vector<Complex> y(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) y[i] = detail::admittance_unchecked(p, grid[i]);
  return ComplexCurve(grid, std::move(y));
}

inline double series_resonance(const MbvdParams& p) {
  if (!(p.lm > 0.0) || !(p.cm > 0.0) || !std::isfinite(p.lm) || !std::isfinite(p.cm)) {
    throw DomainError("series resonance needs lm > 0 and cm > 0");
  }
  return 1.0 / (2.0 * kPi * std::sqrt(p.lm * p.cm));
}

inline double antiresonance(const MbvdParams& p) {
  if (!(p.c0 > 0.0) || !std::isfinite(p.c0)) throw DomainError("anti-resonance needs c0 > 0");
  return series_resonance(p) * std::sqrt(1.0 + p.cm / p.c0);
}

// k2 = (pi^2/8) (fp^2 - fs^2) / fp^2, written through the capacitance ratio.
inline double coupling_k2(const MbvdParams& p) {
  const double fs = series_resonance(p);
  const double fp = antiresonance(p);
  if (!(fp > fs)) return 0.0;
  const double ratio = p.cm / p.c0;
  return (kPi * kPi / 8.0) * ratio / (1.0 + ratio);
}

inline constexpr double kMaxCoupling = kPi * kPi / 8.0;

inline MbvdParams mbvd_from_targets(double fs, double k2, double c0, double q, double rs = 0.0,
                                    double ls = 0.0) {
  if (!(k2 < kMaxCoupling)) {
    throw InfeasibleCouplingError("k2 = " + std::to_string(k2) + " is not below pi^2/8");
  }
  if (!(k2 > 0.0) || !(fs > 0.0) || !(c0 > 0.0) || !(q > 0.0) || !std::isfinite(fs) ||
      !std::isfinite(c0)) {
    throw DomainError("targets need fs, k2, c0, q > 0");
  }
  MbvdParams p;
  p.c0 = c0;
  p.cm = c0 * (1.0 / (1.0 - k2 / kMaxCoupling) - 1.0);
  const double w = 2.0 * kPi * fs;
  p.lm = 1.0 / (w * w * p.cm);
  p.rm = std::isinf(q) ? 0.0 : w * p.lm / q;
  p.rs = rs;
  p.ls = ls;
  validate(p);
  return p;
}

// Frequency of the |Y| maximum inside the band.
inline double perceived_resonance(const MbvdParams& p, FrequencyBand band) {
  validate(p);
  return maximize_in_band(
      [&](double f) { return std::log(std::abs(detail::admittance_unchecked(p, f))); }, band);
}

// Phase-derivative Q, (f/2)|d arg Z / df|, at the |Z| maximum above fs.
inline QFactor q_at_antiresonance(const MbvdParams& p) {
  validate(p);
  if (p.rm == 0.0 && p.rs == 0.0 && p.r0 == 0.0) return QFactor::infinite();
  const double fs = series_resonance(p);
  const double fp = antiresonance(p);
  const double fa = maximize_in_band(
      [&](double f) { return -std::log(std::abs(detail::admittance_unchecked(p, f))); },
      {fs, 2.0 * fp});
  const double h = 1e-6 * fa;
  const Complex z_hi = 1.0 / detail::admittance_unchecked(p, fa + h);
  const Complex z_lo = 1.0 / detail::admittance_unchecked(p, fa - h);
  const double dphi_df = std::arg(z_hi / z_lo) / (2.0 * h);
  return QFactor::bounded(0.5 * fa * std::abs(dphi_df));
}

inline ResonatorSummary summarize(const MbvdParams& p) {
  validate(p);
  ResonatorSummary s;
  s.fs = series_resonance(p);
  s.fp = antiresonance(p);
  s.k2 = coupling_k2(p);
  s.f_perceived = perceived_resonance(p, {0.25 * s.fs, s.fp});
  s.q_antires = q_at_antiresonance(p);
  return s;
}

}  // namespace mmw
