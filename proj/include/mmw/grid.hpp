#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mmw/errors.hpp"

namespace mmw {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Strictly increasing sequence of positive frequencies in hertz.
class FrequencyGrid {
 public:
  FrequencyGrid() = default;

  explicit FrequencyGrid(std::vector<double> hz) : hz_(std::move(hz)) {
    for (std::size_t i = 0; i < hz_.size(); ++i) {
      if (!std::isfinite(hz_[i]) || hz_[i] <= 0.0) {
        throw DomainError("frequency grid: sample " + std::to_string(i) +
                          " is not a finite positive frequency");
      }
      if (i > 0 && !(hz_[i] > hz_[i - 1])) {
        throw DomainError("frequency grid: not strictly increasing at sample " +
                          std::to_string(i));
      }
    }
  }

  static FrequencyGrid linear(double start, double stop, std::size_t count) {
    if (count < 2 || !(start < stop)) {
      throw DomainError("linear grid needs count >= 2 and start < stop");
    }
    std::vector<double> hz(count);
    const double step = (stop - start) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) hz[i] = start + step * static_cast<double>(i);
    hz.back() = stop;
    return FrequencyGrid(std::move(hz));
  }

  static FrequencyGrid logarithmic(double start, double stop, std::size_t count) {
    if (count < 2 || !(start > 0.0) || !(start < stop)) {
      throw DomainError("log grid needs count >= 2 and 0 < start < stop");
    }
    std::vector<double> hz(count);
    const double ratio = std::log(stop / start) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) hz[i] = start * std::exp(ratio * static_cast<double>(i));
    hz.front() = start;
    hz.back() = stop;
    return FrequencyGrid(std::move(hz));
  }

  std::span<const double> hz() const noexcept { return hz_; }
  const std::vector<double>& values() const noexcept { return hz_; }
  std::size_t size() const noexcept { return hz_.size(); }
  bool empty() const noexcept { return hz_.empty(); }
  double operator[](std::size_t i) const { return hz_[i]; }
  double front() const { return hz_.front(); }
  double back() const { return hz_.back(); }

  friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;

 private:
  std::vector<double> hz_;
};

// Frequency grid paired with one complex sample per point (admittance or an S entry).
class ComplexCurve {
 public:
  ComplexCurve() = default;

  ComplexCurve(FrequencyGrid grid, std::vector<Complex> values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    if (grid_.size() != values_.size()) {
      throw DomainError("complex curve: " + std::to_string(values_.size()) + " samples for " +
                        std::to_string(grid_.size()) + " frequencies");
    }
  }

  // Accepts samples in any order; sorts by frequency and rejects duplicates.
  static ComplexCurve sorted(std::vector<double> hz, std::vector<Complex> values) {
    if (hz.size() != values.size()) throw DomainError("complex curve: length mismatch");
    std::vector<std::size_t> order(hz.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return hz[a] < hz[b]; });
    std::vector<double> f(hz.size());
    std::vector<Complex> v(hz.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      f[i] = hz[order[i]];
      v[i] = values[order[i]];
    }
    return ComplexCurve(FrequencyGrid(std::move(f)), std::move(v));
  }

  const FrequencyGrid& grid() const noexcept { return grid_; }
  std::span<const Complex> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double frequency(std::size_t i) const { return grid_[i]; }
  Complex operator[](std::size_t i) const { return values_[i]; }

 private:
  FrequencyGrid grid_;
  std::vector<Complex> values_;
};

inline double magnitude_db(Complex v) { return 20.0 * std::log10(std::abs(v)); }

inline double phase_deg(Complex v) { return std::arg(v) * 180.0 / kPi; }

}  // namespace mmw
