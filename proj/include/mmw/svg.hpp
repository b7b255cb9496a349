#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mmw/errors.hpp"
#include "mmw/grid.hpp"
#include "mmw/text.hpp"

namespace mmw {

namespace detail {

// 1-2-5 tick spacing giving roughly `target` intervals over [lo, hi].
inline std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
  const double span = hi - lo;
  if (!(span > 0.0)) return {lo};
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  }
  return ticks;
}

inline std::string tick_label(double v) {
  std::string s = text::format_fixed(v, 2);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s == "-0" ? "0" : s;
}

}  // namespace detail

// |S21| in dB against frequency in GHz as one polyline with axis ticks.
inline std::string write_s21_svg(const ComplexCurve& s21) {
  if (s21.size() < 2) throw DomainError("plot needs at least two samples");
  constexpr double kWidth = 800, kHeight = 480, kLeft = 70, kRight = 20, kTop = 20, kBottom = 50;
  const double x_lo = s21.frequency(0) / 1e9;
  const double x_hi = s21.frequency(s21.size() - 1) / 1e9;
  std::vector<double> db(s21.size());
  for (std::size_t i = 0; i < db.size(); ++i) db[i] = std::max(magnitude_db(s21[i]), -200.0);
  double y_hi = std::ceil(*std::max_element(db.begin(), db.end()) / 5.0) * 5.0;
  double y_lo = std::floor(*std::min_element(db.begin(), db.end()) / 5.0) * 5.0;
  if (y_hi <= y_lo) y_hi = y_lo + 5.0;

  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * (kWidth - kLeft - kRight); };
  auto py = [&](double y) { return kTop + (y_hi - y) / (y_hi - y_lo) * (kHeight - kTop - kBottom); };
  auto num = [](double v) { return text::format_fixed(v, 2); };

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"480\" "
                    "viewBox=\"0 0 800 480\">\n";
  out += "<path d=\"M" + num(kLeft) + " " + num(kTop) + " L" + num(kLeft) + " " +
         num(kHeight - kBottom) + " L" + num(kWidth - kRight) + " " + num(kHeight - kBottom) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : detail::nice_ticks(x_lo, x_hi)) {
    const double x = px(t);
    out += "<path d=\"M" + num(x) + " " + num(kHeight - kBottom) + " L" + num(x) + " " +
           num(kHeight - kBottom + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(x) + "\" y=\"" + num(kHeight - kBottom + 20) +
           "\" font-size=\"12\" text-anchor=\"middle\">" + detail::tick_label(t) + "</text>\n";
  }
  for (double t : detail::nice_ticks(y_lo, y_hi)) {
    const double y = py(t);
    out += "<path d=\"M" + num(kLeft - 5) + " " + num(y) + " L" + num(kLeft) + " " + num(y) +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(y + 4) +
           "\" font-size=\"12\" text-anchor=\"end\">" + detail::tick_label(t) + "</text>\n";
  }
  out += "<text x=\"" + num(0.5 * (kLeft + kWidth - kRight)) + "\" y=\"" + num(kHeight - 10) +
         "\" font-size=\"13\" text-anchor=\"middle\">Frequency (GHz)</text>\n";
  out += "<text x=\"16\" y=\"" + num(0.5 * (kTop + kHeight - kBottom)) +
         "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         num(0.5 * (kTop + kHeight - kBottom)) + ")\">|S21| (dB)</text>\n";
  out += "<path d=\"";
  for (std::size_t i = 0; i < db.size(); ++i) {
    out += (i ? " L" : "M") + num(px(s21.frequency(i) / 1e9)) + " " + num(py(db[i]));
  }
  out += "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n</svg>\n";
  return out;
}

}  // namespace mmw
