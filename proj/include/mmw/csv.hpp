#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mmw/errors.hpp"
#include "mmw/fitting.hpp"
#include "mmw/grid.hpp"
#include "mmw/metrics.hpp"
#include "mmw/text.hpp"

namespace mmw {

inline std::string write_curve_csv(const ComplexCurve& curve) {
  std::string out = "frequency_hz,re,im,mag_db,phase_deg\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const Complex v = curve[i];
    out += text::format_double(curve.frequency(i)) + "," + text::format_double(v.real()) + "," +
           text::format_double(v.imag()) + "," + text::format_double(magnitude_db(v)) + "," +
           text::format_double(phase_deg(v)) + "\n";
  }
  return out;
}

inline std::vector<std::pair<std::string, double>> metric_rows(const FilterMetrics& m) {
  return {{"fc_hz", m.fc},
          {"il_db", m.il_db},
          {"bw3_hz", m.bw3_hz},
          {"fbw3", m.fbw3},
          {"f_lo3_hz", m.f_lo3},
          {"f_hi3_hz", m.f_hi3},
          {"bw20_hz", m.bw20_hz},
          {"shape_factor20", m.shape_factor20},
          {"oob_rejection_db", m.oob_rejection_db}};
}

inline std::string write_metrics_csv(const FilterMetrics& m) {
  std::string out = "metric,value\n";
  for (const auto& [name, value] : metric_rows(m)) out += name + "," + text::format_double(value) + "\n";
  return out;
}

inline FilterMetrics read_metrics_csv(std::string_view content) {
  const auto lines = text::split_lines(content);
  if (lines.empty() || text::trim(lines[0]) != "metric,value") {
    throw FormatError(1, "metrics CSV must start with 'metric,value'");
  }
  FilterMetrics m;
  auto rows = metric_rows(m);
  std::vector<bool> seen(rows.size(), false);
  double* slots[] = {&m.fc,      &m.il_db,   &m.bw3_hz,         &m.fbw3,           &m.f_lo3,
                     &m.f_hi3,   &m.bw20_hz, &m.shape_factor20, &m.oob_rejection_db};
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const auto line = text::trim(lines[n]);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) throw FormatError(n + 1, "expected 'metric,value'");
    const std::string name(line.substr(0, comma));
    std::size_t k = 0;
    while (k < rows.size() && rows[k].first != name) ++k;
    if (k == rows.size()) throw FormatError(n + 1, "unknown metric '" + name + "'");
    if (seen[k]) throw FormatError(n + 1, "duplicate metric '" + name + "'");
    auto v = text::parse_double(line.substr(comma + 1));
    if (!v) throw FormatError(n + 1, "malformed value for '" + name + "'");
    *slots[k] = *v;
    seen[k] = true;
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (!seen[k]) throw FormatError(0, "metrics CSV is missing '" + rows[k].first + "'");
  }
  return m;
}

inline std::string sweep_csv_header() {
  std::string out = "value";
  for (const auto& [name, v] : metric_rows(FilterMetrics{})) out += "," + name;
  return out + ",status\n";
}

// `error` empty means the metrics are valid.
inline std::string sweep_csv_row(double value, const FilterMetrics& m, const std::string& error) {
  std::string out = text::format_double(value);
  for (const auto& [name, v] : metric_rows(m)) out += "," + (error.empty() ? text::format_double(v) : "");
  std::string status = error.empty() ? "ok" : error;
  for (char& c : status) {
    if (c == ',' || c == '\n') c = ';';
  }
  return out + "," + status + "\n";
}

inline std::string write_fit_report_csv(const FitResult& fit) {
  std::string out = "quantity,value\n";
  auto row = [&](const char* name, double v) { out += std::string(name) + "," + text::format_double(v) + "\n"; };
  const auto& p = fit.params;
  row("rm", p.rm);
  row("lm", p.lm);
  row("cm", p.cm);
  row("c0", p.c0);
  row("rs", p.rs);
  row("ls", p.ls);
  row("r0", p.r0);
  const ResonatorSummary s = fit.summary();
  row("fs_hz", s.fs);
  row("fp_hz", s.fp);
  row("f_perceived_hz", s.f_perceived);
  row("k2", s.k2);
  out += std::string("q_antires,") + (s.q_antires.unbounded ? "inf" : text::format_double(s.q_antires.value)) + "\n";
  row("residual_norm", fit.residual_norm);
  out += "iterations," + std::to_string(fit.iterations) + "\n";
  out += std::string("converged,") + (fit.converged ? "1" : "0") + "\n";
  return out;
}

}  // namespace mmw
