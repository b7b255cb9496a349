#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "mmw/errors.hpp"

namespace mmw {

struct NelderMeadOptions {
  int max_evaluations = 2000;
  double initial_step = 0.05;     // relative perturbation per coordinate
  double value_spread = 1e-12;    // stop once the simplex values agree this well...
  double relative_spread = 1e-10; // ...and its vertices coincide to this relative size
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
};

// Deterministic Nelder-Mead with the standard coefficients. The initial
// simplex is x0 plus one vertex per coordinate scaled by (1 + initial_step).
template <class Objective>
NelderMeadResult nelder_mead(Objective&& objective, std::vector<double> x0,
                             const NelderMeadOptions& opts = {}) {
  const std::size_t n = x0.size();
  if (n == 0) throw DomainError("nelder_mead needs at least one coordinate");
  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;

  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return objective(x);
  };

  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) {
    simplex[i + 1][i] = x0[i] != 0.0 ? x0[i] * (1.0 + opts.initial_step) : 2.5e-4;
  }
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<std::vector<double>> s(n + 1);
    std::vector<double> v(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      s[i] = simplex[order[i]];
      v[i] = values[order[i]];
    }
    simplex = std::move(s);
    values = std::move(v);
  };
  auto collapsed = [&] {
    if (values[n] - values[0] > opts.value_spread) return false;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        const double scale = std::max(std::abs(simplex[0][k]), 1e-300);
        if (std::abs(simplex[i][k] - simplex[0][k]) > opts.relative_spread * scale) return false;
      }
    }
    return true;
  };
  auto along = [&](const std::vector<double>& centroid, double t) {
    std::vector<double> p(n);
    for (std::size_t k = 0; k < n; ++k) p[k] = centroid[k] + t * (simplex[n][k] - centroid[k]);
    return p;
  };

  sort_simplex();
  while (evals < opts.max_evaluations && !collapsed()) {
    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / static_cast<double>(n);
    }
    const auto reflected = along(centroid, -kReflect);
    const double f_r = eval(reflected);
    if (f_r < values[0]) {
      const auto expanded = along(centroid, -kReflect * kExpand);
      const double f_e = eval(expanded);
      if (f_e < f_r) {
        simplex[n] = expanded;
        values[n] = f_e;
      } else {
        simplex[n] = reflected;
        values[n] = f_r;
      }
    } else if (f_r < values[n - 1]) {
      simplex[n] = reflected;
      values[n] = f_r;
    } else {
      bool shrink = false;
      if (f_r < values[n]) {
        const auto outside = along(centroid, -kReflect * kContract);
        const double f_c = eval(outside);
        if (f_c <= f_r) {
          simplex[n] = outside;
          values[n] = f_c;
        } else {
          shrink = true;
        }
      } else {
        const auto inside = along(centroid, kContract);
        const double f_c = eval(inside);
        if (f_c < values[n]) {
          simplex[n] = inside;
          values[n] = f_c;
        } else {
          shrink = true;
        }
      }
      if (shrink) {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t k = 0; k < n; ++k) {
            simplex[i][k] = simplex[0][k] + kShrink * (simplex[i][k] - simplex[0][k]);
          }
          values[i] = eval(simplex[i]);
        }
      }
    }
    sort_simplex();
  }
  return {simplex[0], values[0], evals};
}

}  // namespace mmw
