#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mmw/errors.hpp"
#include "mmw/grid.hpp"

namespace mmw {

// "3-dB" band edges are taken at the half-power level, so a single-pole
// response has bw3 = f0/Q exactly.
inline const double kHalfPowerDb = 10.0 * std::log10(2.0);
inline constexpr double kShapeFactorDb = 20.0;
inline constexpr double kDefaultGuard = 0.15;

struct FilterMetrics {
  double fc = 0.0;
  double il_db = 0.0;
  double bw3_hz = 0.0;
  double fbw3 = 0.0;
  double f_lo3 = 0.0;
  double f_hi3 = 0.0;
  double bw20_hz = 0.0;
  double shape_factor20 = 0.0;
  double oob_rejection_db = 0.0;

  friend bool operator==(const FilterMetrics&, const FilterMetrics&) = default;
};

// Linear interpolation in (frequency, dB) for the frequency where the segment
// reaches target_db.
inline double crossing_interpolate(double f_a, double y_a_db, double f_b, double y_b_db,
                                   double target_db) {
  if (!(f_a < f_b)) throw DomainError("crossing_interpolate needs f_a < f_b");
  const double lo = std::min(y_a_db, y_b_db);
  const double hi = std::max(y_a_db, y_b_db);
  if (!(target_db >= lo && target_db <= hi)) {
    throw DomainError("crossing target " + std::to_string(target_db) + " dB outside [" +
                      std::to_string(lo) + ", " + std::to_string(hi) + "] dB");
  }
  if (y_a_db == y_b_db) return f_a;
  return f_a + (target_db - y_a_db) * (f_b - f_a) / (y_b_db - y_a_db);
}

namespace detail {

struct Edges {
  double lo = 0.0;
  double hi = 0.0;
};

// Nearest crossings of `level` on each side of the peak index.
inline Edges band_edges(std::span<const double> f, const std::vector<double>& db, std::size_t peak,
                        double level, const char* label) {
  std::size_t j = peak;
  while (j > 0 && db[j - 1] > level) --j;
  if (j == 0) {
    throw BandEdgeError(BandSide::Lower, std::string(label) + " crossing below the passband is not "
                                                              "bracketed by the grid");
  }
  Edges e;
  e.lo = crossing_interpolate(f[j - 1], db[j - 1], f[j], db[j], level);
  std::size_t k = peak;
  while (k + 1 < db.size() && db[k + 1] > level) ++k;
  if (k + 1 == db.size()) {
    throw BandEdgeError(BandSide::Upper, std::string(label) + " crossing above the passband is not "
                                                              "bracketed by the grid");
  }
  e.hi = crossing_interpolate(f[k], db[k], f[k + 1], db[k + 1], level);
  return e;
}

}  // namespace detail

inline FilterMetrics passband_metrics(const ComplexCurve& s21, double guard = kDefaultGuard) {
  if (!(guard >= 0.0 && guard < 1.0)) throw DomainError("stopband guard must lie in [0, 1)");
  const std::size_t n = s21.size();
  if (n < 3) throw DegeneratePassbandError("transmission curve needs at least 3 samples");

  std::vector<double> db(n);
  for (std::size_t i = 0; i < n; ++i) db[i] = magnitude_db(s21[i]);
  const auto peak = static_cast<std::size_t>(std::max_element(db.begin(), db.end()) - db.begin());
  if (peak == 0 || peak + 1 == n) {
    throw DegeneratePassbandError("transmission maximum lies on the grid boundary");
  }
  const double peak_db = db[peak];
  if (!std::isfinite(peak_db)) throw DegeneratePassbandError("transmission peak is not finite");

  const auto f = s21.grid().hz();
  const auto e3 = detail::band_edges(f, db, peak, peak_db - kHalfPowerDb, "3-dB");
  const auto e20 = detail::band_edges(f, db, peak, peak_db - kShapeFactorDb, "20-dB");

  FilterMetrics m;
  m.il_db = -peak_db;
  m.f_lo3 = e3.lo;
  m.f_hi3 = e3.hi;
  m.bw3_hz = e3.hi - e3.lo;
  m.fc = 0.5 * (e3.lo + e3.hi);
  m.fbw3 = m.bw3_hz / m.fc;
  m.bw20_hz = e20.hi - e20.lo;
  m.shape_factor20 = m.bw20_hz / m.bw3_hz;

  const double stop_lo = m.f_lo3 * (1.0 - guard);
  const double stop_hi = m.f_hi3 * (1.0 + guard);
  bool any = false;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (f[i] <= stop_lo || f[i] >= stop_hi) {
      any = true;
      worst = std::max(worst, db[i]);
    }
  }
  if (!any) throw StopbandError("grid has no samples outside the guarded passband");
  m.oob_rejection_db = peak_db - worst;
  return m;
}

}  // namespace mmw
