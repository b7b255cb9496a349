#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mmw/errors.hpp"
#include "mmw/grid.hpp"
#include "mmw/mbvd.hpp"

namespace mmw {

enum class WeightMode { InverseMagnitude, Uniform };

struct FitOptions {
  int max_iterations = 200;
  double relative_tolerance = 1e-10;
  double initial_damping = 1e-3;
  WeightMode weight_mode = WeightMode::InverseMagnitude;
  bool fit_r0 = false;  // r0 stays at its initial value unless unfrozen
};

struct FitResult {
  MbvdParams params;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;

  ResonatorSummary summary() const { return summarize(params); }
};

inline constexpr std::size_t kMinFitSamples = 7;

namespace detail {

// Indices of windowed local extrema of v: sign > 0 for maxima, < 0 for minima.
inline std::vector<std::size_t> windowed_extrema(const std::vector<double>& v, std::size_t w,
                                                 int sign) {
  std::vector<std::size_t> out;
  if (v.size() < 2 * w + 1) return out;
  for (std::size_t i = w; i + w < v.size(); ++i) {
    bool extreme = true;
    for (std::size_t k = i - w; k <= i + w && extreme; ++k) {
      if (k == i) continue;
      extreme = sign > 0 ? v[i] > v[k] || (v[i] == v[k] && k > i)
                         : v[i] < v[k] || (v[i] == v[k] && k > i);
    }
    if (extreme) out.push_back(i);
  }
  return out;
}

inline double median(std::vector<double> v) {
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

// Parameter slots in fit order.
enum Slot : std::size_t { kRm, kLm, kCm, kC0, kRs, kLs, kR0, kSlotCount };

inline std::array<double, kSlotCount> to_slots(const MbvdParams& p) {
  return {p.rm, p.lm, p.cm, p.c0, p.rs, p.ls, p.r0};
}

inline MbvdParams from_slots(const std::array<double, kSlotCount>& s) {
  return {s[kRm], s[kLm], s[kCm], s[kC0], s[kRs], s[kLs], s[kR0]};
}

}  // namespace detail

// Seeds the modified MBVD parameters from an admittance curve: acoustic
// resonance from the first |Y| peak, anti-resonance from the next dip, static
// capacitance from the low-frequency susceptance, routing inductance from the
// EM self-resonance above the anti-resonance.
inline MbvdParams initial_guess(const ComplexCurve& curve) {
  const std::size_t n = curve.size();
  if (n < kMinFitSamples) throw StructureError("admittance curve is too short to fit");
  std::vector<double> log_mag(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::abs(curve[i]);
    if (!(a > 0.0) || !std::isfinite(a)) throw StructureError("admittance curve has zero samples");
    log_mag[i] = std::log(a);
  }
  const std::size_t w = std::max<std::size_t>(2, n / 100);
  const auto maxima = detail::windowed_extrema(log_mag, w, +1);
  const auto minima = detail::windowed_extrema(log_mag, w, -1);
  if (maxima.empty()) throw StructureError("no admittance maximum (resonance) in the curve");
  const std::size_t i_res = maxima.front();
  auto dip = std::find_if(minima.begin(), minima.end(), [&](std::size_t j) { return j > i_res; });
  if (dip == minima.end()) {
    throw StructureError("no admittance minimum (anti-resonance) above the resonance");
  }
  const std::size_t i_anti = *dip;
  auto em = std::find_if(maxima.begin(), maxima.end(), [&](std::size_t k) { return k > i_anti; });

  const double fs = curve.frequency(i_res);
  const double fp = curve.frequency(i_anti);

  const std::size_t low = std::max<std::size_t>(1, n / 10);
  std::vector<double> c_low(low);
  for (std::size_t i = 0; i < low; ++i) {
    c_low[i] = curve[i].imag() / (2.0 * kPi * curve.frequency(i));
  }
  const double c_total = detail::median(std::move(c_low));
  if (!(c_total > 0.0)) throw StructureError("low-frequency susceptance is not capacitive");

  const double ratio = (fp / fs) * (fp / fs);
  MbvdParams p;
  p.c0 = c_total / ratio;
  p.cm = p.c0 * (ratio - 1.0);
  const double ws = 2.0 * kPi * fs;
  p.lm = 1.0 / (ws * ws * p.cm);
  p.rm = 1.0 / std::abs(curve[i_res]);
  p.rs = 0.5;
  const double f_em = em != maxima.end() ? curve.frequency(*em) : 3.0 * curve.frequency(n - 1);
  const double wem = 2.0 * kPi * f_em;
  p.ls = 1.0 / (wem * wem * p.c0);
  p.r0 = 0.0;
  validate(p);
  return p;
}

// Damped Gauss-Newton (Levenberg-Marquardt) on the complex admittance
// residual, optimizing log-parameters so every fitted value stays positive.
// Parameters that start at exactly zero are held at zero.
inline FitResult fit_mbvd(const ComplexCurve& curve, const MbvdParams& init,
                          const FitOptions& opts = {}) {
  validate(init);
  if (curve.size() < kMinFitSamples) {
    throw DomainError("fit needs at least " + std::to_string(kMinFitSamples) + " samples");
  }
  if (opts.max_iterations < 1 || !(opts.relative_tolerance > 0.0) ||
      !(opts.initial_damping > 0.0)) {
    throw DomainError("fit options need max_iterations >= 1 and positive tolerances");
  }

  const std::size_t n = curve.size();
  std::vector<double> weight(n, 1.0);
  if (opts.weight_mode == WeightMode::InverseMagnitude) {
    for (std::size_t i = 0; i < n; ++i) {
      const double a = std::abs(curve[i]);
      if (!(a > 0.0)) throw DomainError("inverse-magnitude weighting needs |Y| > 0");
      weight[i] = 1.0 / a;
    }
  }

  const auto base = detail::to_slots(init);
  std::vector<std::size_t> free;
  for (std::size_t s = 0; s < detail::kSlotCount; ++s) {
    if (s == detail::kR0 && !opts.fit_r0) continue;
    if (base[s] > 0.0) free.push_back(s);
  }
  const auto m = static_cast<Eigen::Index>(free.size());
  const auto rows = static_cast<Eigen::Index>(2 * n);

  auto unpack = [&](const Eigen::VectorXd& x) {
    auto slots = base;
    for (std::size_t k = 0; k < free.size(); ++k) {
      slots[free[k]] = std::exp(x[static_cast<Eigen::Index>(k)]);
    }
    return detail::from_slots(slots);
  };
  auto residual = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
    const MbvdParams p = unpack(x);
    for (std::size_t i = 0; i < n; ++i) {
      const Complex d = (detail::admittance_unchecked(p, curve.frequency(i)) - curve[i]) * weight[i];
      r[static_cast<Eigen::Index>(i)] = d.real();
      r[static_cast<Eigen::Index>(n + i)] = d.imag();
    }
    const double c = r.squaredNorm();
    return std::isfinite(c) ? c : std::numeric_limits<double>::infinity();
  };
  auto rms = [&](double cost) { return std::sqrt(cost / static_cast<double>(rows)); };

  Eigen::VectorXd x(m);
  for (std::size_t k = 0; k < free.size(); ++k) x[static_cast<Eigen::Index>(k)] = std::log(base[free[k]]);

  Eigen::VectorXd r(rows), r_plus(rows), r_minus(rows), r_trial(rows);
  double cost = residual(x, r);
  if (!std::isfinite(cost)) throw DomainError("initial parameters give a non-finite residual");

  constexpr double kStep = 1e-6;
  constexpr double kExactFit = 1e-14;
  constexpr double kMaxDamping = 1e16;

  FitResult result;
  double lambda = opts.initial_damping;
  Eigen::MatrixXd jac(rows, m);

  if (rms(cost) < kExactFit || m == 0) {
    result.params = unpack(x);
    result.residual_norm = rms(cost);
    result.converged = true;
    return result;
  }

  for (int it = 0; it < opts.max_iterations; ++it) {
    for (Eigen::Index k = 0; k < m; ++k) {
      Eigen::VectorXd xp = x, xm = x;
      xp[k] += kStep;
      xm[k] -= kStep;
      residual(xp, r_plus);
      residual(xm, r_minus);
      jac.col(k) = (r_plus - r_minus) / (2.0 * kStep);
    }
    const Eigen::MatrixXd normal = jac.transpose() * jac;
    const Eigen::VectorXd gradient = jac.transpose() * r;

    bool accepted = false;
    double trial_cost = cost;
    Eigen::VectorXd trial;
    while (lambda <= kMaxDamping) {
      Eigen::MatrixXd damped = normal;
      for (Eigen::Index k = 0; k < m; ++k) {
        damped(k, k) += lambda * std::max(normal(k, k), 1e-300);
      }
      Eigen::LDLT<Eigen::MatrixXd> ldlt(damped);
      const Eigen::VectorXd delta = ldlt.solve(-gradient);
      if (ldlt.info() == Eigen::Success && delta.allFinite()) {
        trial = x + delta;
        trial_cost = residual(trial, r_trial);
        if (trial_cost < cost) {
          accepted = true;
          break;
        }
      }
      lambda *= 10.0;
    }
    if (!accepted) {
      result.converged = false;
      break;
    }
    const double relative_change = (cost - trial_cost) / cost;
    x = trial;
    r = r_trial;
    cost = trial_cost;
    lambda = std::max(lambda / 10.0, 1e-300);
    result.iterations = it + 1;
    if (relative_change < opts.relative_tolerance || rms(cost) < kExactFit) {
      result.converged = true;
      break;
    }
  }

  result.params = unpack(x);
  result.residual_norm = rms(cost);
  return result;
}

}  // namespace mmw
