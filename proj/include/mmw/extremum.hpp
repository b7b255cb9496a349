#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "mmw/errors.hpp"

namespace mmw {

struct FrequencyBand {
  double lo = 0.0;
  double hi = 0.0;
};

inline constexpr double kScanPointsPerDecade = 2001.0;

// Golden-section search for the maximum of a unimodal fn on [a, b].
template <class Fn>
double golden_section_max(Fn&& fn, double a, double b, double rel_tol = 1e-12) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  for (int it = 0; it < 400 && (b - a) > rel_tol * std::abs(a + b) * 0.5; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fn(d);
    }
  }
  return 0.5 * (a + b);
}

// Locates the global maximum of fn over the band: dense log-spaced scan, then
// golden-section refinement inside the bracketing grid cells. A maximum that
// sits on either band edge means the band holds no interior peak.
template <class Fn>
double maximize_in_band(Fn&& fn, FrequencyBand band) {
  if (!(band.lo > 0.0) || !(band.lo < band.hi) || !std::isfinite(band.hi)) {
    throw SearchError("search band must satisfy 0 < lo < hi");
  }
  const double decades = std::log10(band.hi / band.lo);
  const auto count = static_cast<std::size_t>(std::ceil(kScanPointsPerDecade * decades)) + 3;
  const double step = std::log(band.hi / band.lo) / static_cast<double>(count - 1);
  auto at = [&](std::size_t i) {
    return i + 1 == count ? band.hi : band.lo * std::exp(step * static_cast<double>(i));
  };

  std::size_t best = 0;
  double best_value = fn(band.lo);
  for (std::size_t i = 1; i < count; ++i) {
    const double v = fn(at(i));
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  if (!std::isfinite(best_value)) {
    throw SearchError("objective is not finite at the scanned maximum");
  }
  if (best == 0 || best + 1 == count) {
    throw SearchError("no interior maximum in [" + std::to_string(band.lo) + ", " +
                      std::to_string(band.hi) + "] Hz");
  }
  return golden_section_max(fn, at(best - 1), at(best + 1));
}

}  // namespace mmw
