#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mmw/errors.hpp"
#include "mmw/grid.hpp"
#include "mmw/network.hpp"
#include "mmw/text.hpp"

namespace mmw {

enum class FrequencyUnit { Hz, kHz, MHz, GHz };
enum class DataFormat { RI, MA, DB };

// Touchstone v1 option line. Omitted fields keep the v1 defaults (GHz S MA R 50).
struct TouchstoneHeader {
  FrequencyUnit frequency_unit = FrequencyUnit::GHz;
  DataFormat format = DataFormat::MA;
  double reference_resistance = 50.0;

  friend bool operator==(const TouchstoneHeader&, const TouchstoneHeader&) = default;
};

struct OnePortData {
  TouchstoneHeader header;
  ComplexCurve s11;
};

struct TwoPortData {
  TouchstoneHeader header;
  SParameterBlock s;
};

using TouchstoneData = std::variant<OnePortData, TwoPortData>;

inline double unit_scale(FrequencyUnit u) {
  switch (u) {
    case FrequencyUnit::Hz: return 1.0;
    case FrequencyUnit::kHz: return 1e3;
    case FrequencyUnit::MHz: return 1e6;
    case FrequencyUnit::GHz: return 1e9;
  }
  return 1.0;
}

inline const char* to_string(FrequencyUnit u) {
  switch (u) {
    case FrequencyUnit::Hz: return "Hz";
    case FrequencyUnit::kHz: return "kHz";
    case FrequencyUnit::MHz: return "MHz";
    case FrequencyUnit::GHz: return "GHz";
  }
  return "Hz";
}

inline const char* to_string(DataFormat f) {
  switch (f) {
    case DataFormat::RI: return "RI";
    case DataFormat::MA: return "MA";
    case DataFormat::DB: return "DB";
  }
  return "RI";
}

inline TouchstoneHeader parse_option_line(std::string_view line, std::size_t line_no) {
  TouchstoneHeader h;
  auto tokens = text::split_whitespace(line.substr(1));
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string t = text::upper(tokens[i]);
    if (t == "HZ") h.frequency_unit = FrequencyUnit::Hz;
    else if (t == "KHZ") h.frequency_unit = FrequencyUnit::kHz;
    else if (t == "MHZ") h.frequency_unit = FrequencyUnit::MHz;
    else if (t == "GHZ") h.frequency_unit = FrequencyUnit::GHz;
    else if (t == "S") continue;
    else if (t == "Y" || t == "Z" || t == "H" || t == "G") {
      throw FormatError(line_no, "only S parameters are supported, got '" + t + "'");
    } else if (t == "RI") h.format = DataFormat::RI;
    else if (t == "MA") h.format = DataFormat::MA;
    else if (t == "DB") h.format = DataFormat::DB;
    else if (t == "R") {
      if (i + 1 >= tokens.size()) throw FormatError(line_no, "option 'R' needs a value");
      auto r = text::parse_double(tokens[++i]);
      if (!r || !(*r > 0.0)) throw FormatError(line_no, "reference resistance must be a positive number");
      h.reference_resistance = *r;
    } else {
      throw FormatError(line_no, "unknown option token '" + std::string(tokens[i]) + "'");
    }
  }
  return h;
}

namespace detail {

inline Complex decode_pair(DataFormat f, double a, double b) {
  const double rad = b * kPi / 180.0;
  switch (f) {
    case DataFormat::RI: return {a, b};
    case DataFormat::MA: return std::polar(a, rad);
    case DataFormat::DB: return std::polar(std::pow(10.0, a / 20.0), rad);
  }
  return {a, b};
}

inline std::string encode_pair(DataFormat f, Complex v) {
  switch (f) {
    case DataFormat::RI:
      return text::format_double(v.real()) + " " + text::format_double(v.imag());
    case DataFormat::MA:
      return text::format_double(std::abs(v)) + " " + text::format_double(phase_deg(v));
    case DataFormat::DB: {
      // An exact zero has no finite dB value; the smallest denormal stands in for it.
      const double mag = std::max(std::abs(v), std::numeric_limits<double>::denorm_min());
      return text::format_double(20.0 * std::log10(mag)) + " " + text::format_double(phase_deg(v));
    }
  }
  return {};
}

struct RawTouchstone {
  TouchstoneHeader header;
  std::vector<double> hz;
  std::vector<std::vector<Complex>> rows;
  std::size_t columns = 0;  // values per data line, frequency included
};

inline RawTouchstone parse_raw(std::string_view content, std::size_t expected_columns) {
  RawTouchstone raw;
  bool have_header = false;
  const auto lines = text::split_lines(content);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    std::string_view line = lines[n];
    if (auto bang = line.find('!'); bang != std::string_view::npos) line = line.substr(0, bang);
    line = text::trim(line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (have_header) throw FormatError(line_no, "repeated option line");
      if (!raw.hz.empty()) throw FormatError(line_no, "option line after data");
      raw.header = parse_option_line(line, line_no);
      have_header = true;
      continue;
    }
    const auto tokens = text::split_whitespace(line);
    if (expected_columns == 0) expected_columns = tokens.size();
    if (expected_columns != 3 && expected_columns != 9) {
      throw FormatError(line_no, "expected 3 (1-port) or 9 (2-port) values, found " +
                                     std::to_string(tokens.size()));
    }
    if (tokens.size() != expected_columns) {
      throw FormatError(line_no, "expected " + std::to_string(expected_columns) +
                                     " values, found " + std::to_string(tokens.size()));
    }
    std::vector<double> v(tokens.size());
    for (std::size_t k = 0; k < tokens.size(); ++k) {
      auto parsed = text::parse_double(tokens[k]);
      if (!parsed) throw FormatError(line_no, "malformed number '" + std::string(tokens[k]) + "'");
      v[k] = *parsed;
    }
    const double hz = v[0] * unit_scale(raw.header.frequency_unit);
    if (!(hz > 0.0)) throw FormatError(line_no, "frequency must be positive");
    if (!raw.hz.empty() && !(hz > raw.hz.back())) {
      throw FormatError(line_no, "frequencies are not strictly increasing");
    }
    raw.hz.push_back(hz);
    std::vector<Complex> row;
    for (std::size_t k = 1; k + 1 < v.size(); k += 2) {
      row.push_back(decode_pair(raw.header.format, v[k], v[k + 1]));
    }
    raw.rows.push_back(std::move(row));
  }
  raw.columns = expected_columns;
  return raw;
}

inline OnePortData to_one_port(RawTouchstone raw) {
  std::vector<Complex> s11;
  s11.reserve(raw.rows.size());
  for (const auto& r : raw.rows) s11.push_back(r[0]);
  return {raw.header, ComplexCurve(FrequencyGrid(std::move(raw.hz)), std::move(s11))};
}

inline TwoPortData to_two_port(RawTouchstone raw) {
  std::vector<Matrix2> s;
  s.reserve(raw.rows.size());
  // Two-port line order is S11 S21 S12 S22.
  for (const auto& r : raw.rows) s.push_back({r[0], r[2], r[1], r[3]});
  const double z0 = raw.header.reference_resistance;
  return {raw.header, SParameterBlock(FrequencyGrid(std::move(raw.hz)), std::move(s), z0)};
}

inline std::string option_line(FrequencyUnit unit, DataFormat format, double z0) {
  return std::string("# ") + to_string(unit) + " S " + to_string(format) + " R " +
         text::format_double(z0) + "\n";
}

}  // namespace detail

// Port count is inferred from the first data line (3 values: 1-port, 9: 2-port).
inline TouchstoneData read_touchstone(std::string_view content) {
  auto raw = detail::parse_raw(content, 0);
  if (raw.columns == 0) throw FormatError(0, "no data lines; port count cannot be inferred");
  if (raw.columns == 3) return detail::to_one_port(std::move(raw));
  return detail::to_two_port(std::move(raw));
}

inline OnePortData read_touchstone_1port(std::string_view content) {
  return detail::to_one_port(detail::parse_raw(content, 3));
}

inline TwoPortData read_touchstone_2port(std::string_view content) {
  return detail::to_two_port(detail::parse_raw(content, 9));
}

inline std::string write_touchstone(const ComplexCurve& s11, const TouchstoneHeader& header) {
  std::string out = detail::option_line(header.frequency_unit, header.format,
                                        header.reference_resistance);
  const double scale = unit_scale(header.frequency_unit);
  for (std::size_t i = 0; i < s11.size(); ++i) {
    out += text::format_double(s11.frequency(i) / scale) + " " +
           detail::encode_pair(header.format, s11[i]) + "\n";
  }
  return out;
}

// Reference resistance comes from the block.
inline std::string write_touchstone(const SParameterBlock& block, FrequencyUnit unit = FrequencyUnit::Hz,
                                    DataFormat format = DataFormat::RI) {
  std::string out = detail::option_line(unit, format, block.z0());
  const double scale = unit_scale(unit);
  for (std::size_t i = 0; i < block.size(); ++i) {
    const Matrix2& s = block[i];
    out += text::format_double(block.grid()[i] / scale) + " " + detail::encode_pair(format, s.m11) +
           " " + detail::encode_pair(format, s.m21) + " " + detail::encode_pair(format, s.m12) +
           " " + detail::encode_pair(format, s.m22) + "\n";
  }
  return out;
}

}  // namespace mmw
