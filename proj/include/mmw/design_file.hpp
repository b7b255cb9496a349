#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mmw/errors.hpp"
#include "mmw/mbvd.hpp"
#include "mmw/network.hpp"
#include "mmw/synthesis.hpp"
#include "mmw/text.hpp"

// Line-oriented key-value files:
//
//   # comment
//   [shunt]
//   rm = 7.7
//   ...
//   [filter]
//   z0 = 50
//   topology = shunt, series, shunt
//
// Sections: [series], [shunt] (resonators), [filter], [spec]. Values are SI
// decimals except `topology`, a comma list of resonator section names.

namespace mmw {

struct FilterSection {
  double z0 = 50.0;
  std::vector<std::string> topology;

  friend bool operator==(const FilterSection&, const FilterSection&) = default;
};

// Every section a file may carry, each present only if the file had it.
struct DesignDocument {
  std::map<std::string, MbvdParams> resonators;  // "series" and/or "shunt"
  std::optional<FilterSection> filter;
  std::optional<DesignSpec> spec;
};

namespace detail {

struct KeyField {
  const char* key;
  bool required;
};

inline constexpr std::array<KeyField, 7> kResonatorKeys = {{{"rm", true},
                                                             {"lm", true},
                                                             {"cm", true},
                                                             {"c0", true},
                                                             {"rs", true},
                                                             {"ls", true},
                                                             {"r0", false}}};

inline constexpr std::array<KeyField, 9> kSpecKeys = {{{"fc_target", true},
                                                       {"fbw_target", true},
                                                       {"z0", true},
                                                       {"oob_min_db", true},
                                                       {"k2", true},
                                                       {"q", true},
                                                       {"rs", true},
                                                       {"ls", true},
                                                       {"il_max_db", true}}};

inline double* resonator_field(MbvdParams& p, std::string_view key) {
  if (key == "rm") return &p.rm;
  if (key == "lm") return &p.lm;
  if (key == "cm") return &p.cm;
  if (key == "c0") return &p.c0;
  if (key == "rs") return &p.rs;
  if (key == "ls") return &p.ls;
  if (key == "r0") return &p.r0;
  return nullptr;
}

inline double* spec_field(DesignSpec& s, std::string_view key) {
  if (key == "fc_target") return &s.fc_target;
  if (key == "fbw_target") return &s.fbw_target;
  if (key == "z0") return &s.z0;
  if (key == "oob_min_db") return &s.oob_min_db;
  if (key == "k2") return &s.k2;
  if (key == "q") return &s.q;
  if (key == "rs") return &s.rs;
  if (key == "ls") return &s.ls;
  if (key == "il_max_db") return &s.il_max_db;
  return nullptr;
}

struct Entry {
  std::string value;
  std::size_t line = 0;
};

struct RawSection {
  std::string name;
  std::size_t line = 0;
  std::map<std::string, Entry> entries;
};

inline std::vector<RawSection> parse_sections(std::string_view content) {
  std::vector<RawSection> sections;
  const auto lines = text::split_lines(content);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    std::string_view line = lines[n];
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw FormatError(line_no, "malformed section header");
      std::string name(text::trim(line.substr(1, line.size() - 2)));
      if (name != "series" && name != "shunt" && name != "filter" && name != "spec") {
        throw FormatError(line_no, "unknown section [" + name + "]");
      }
      for (const auto& s : sections) {
        if (s.name == name) throw FormatError(line_no, "duplicate section [" + name + "]");
      }
      sections.push_back({name, line_no, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw FormatError(line_no, "expected 'key = value'");
    if (sections.empty()) throw FormatError(line_no, "key outside of any section");
    std::string key(text::trim(line.substr(0, eq)));
    std::string value(text::trim(line.substr(eq + 1)));
    if (key.empty()) throw FormatError(line_no, "empty key");
    auto& entries = sections.back().entries;
    if (entries.contains(key)) throw FormatError(line_no, "duplicate key '" + key + "'");
    entries.emplace(std::move(key), Entry{std::move(value), line_no});
  }
  return sections;
}

inline double number_value(const Entry& e, const std::string& key) {
  auto v = text::parse_double(e.value);
  if (!v) throw FormatError(e.line, "malformed number for '" + key + "': '" + e.value + "'");
  return *v;
}

template <std::size_t N, class Record, class FieldFn>
Record read_numeric_section(const RawSection& s, const std::array<KeyField, N>& keys,
                            FieldFn field) {
  Record r{};
  for (const auto& [key, entry] : s.entries) {
    double* slot = field(r, key);
    if (!slot) throw FormatError(entry.line, "unknown key '" + key + "' in [" + s.name + "]");
    *slot = number_value(entry, key);
  }
  for (const auto& k : keys) {
    if (k.required && !s.entries.contains(k.key)) {
      throw FormatError(s.line, "[" + s.name + "] is missing required key '" + k.key + "'");
    }
  }
  return r;
}

inline FilterSection read_filter_section(const RawSection& s) {
  FilterSection f;
  f.topology.clear();
  for (const auto& [key, entry] : s.entries) {
    if (key == "z0") {
      f.z0 = number_value(entry, key);
    } else if (key == "topology") {
      std::string_view rest = entry.value;
      while (true) {
        const auto comma = rest.find(',');
        std::string name(text::trim(rest.substr(0, comma)));
        if (name != "series" && name != "shunt") {
          throw FormatError(entry.line, "topology entry '" + name + "' is not 'series' or 'shunt'");
        }
        f.topology.push_back(std::move(name));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
      }
    } else {
      throw FormatError(entry.line, "unknown key '" + key + "' in [filter]");
    }
  }
  for (const char* k : {"z0", "topology"}) {
    if (!s.entries.contains(k)) {
      throw FormatError(s.line, std::string("[filter] is missing required key '") + k + "'");
    }
  }
  return f;
}

inline std::string resonator_block(const std::string& name, const MbvdParams& p) {
  std::string out = "[" + name + "]\n";
  for (const auto& k : kResonatorKeys) {
    MbvdParams copy = p;
    out += std::string(k.key) + " = " + text::format_double(*resonator_field(copy, k.key)) + "\n";
  }
  return out;
}

}  // namespace detail

inline DesignDocument parse_design_document(std::string_view content) {
  DesignDocument doc;
  for (const auto& s : detail::parse_sections(content)) {
    if (s.name == "series" || s.name == "shunt") {
      doc.resonators[s.name] = detail::read_numeric_section<7, MbvdParams>(
          s, detail::kResonatorKeys, [](MbvdParams& p, std::string_view k) { return detail::resonator_field(p, k); });
    } else if (s.name == "filter") {
      doc.filter = detail::read_filter_section(s);
    } else {
      doc.spec = detail::read_numeric_section<9, DesignSpec>(
          s, detail::kSpecKeys, [](DesignSpec& d, std::string_view k) { return detail::spec_field(d, k); });
    }
  }
  return doc;
}

// Builds the ladder described by a document's [filter] and resonator sections.
inline LadderDesign to_ladder(const DesignDocument& doc) {
  if (!doc.filter) throw FormatError(0, "design file has no [filter] section");
  LadderDesign d;
  d.z0 = doc.filter->z0;
  d.resonators = doc.resonators;
  for (const auto& name : doc.filter->topology) {
    if (!doc.resonators.contains(name)) {
      throw FormatError(0, "topology references [" + name + "], which the file does not define");
    }
    d.elements.push_back({name == "series" ? ElementKind::Series : ElementKind::Shunt, name});
  }
  validate(d);
  return d;
}

inline LadderDesign read_design(std::string_view content) { return to_ladder(parse_design_document(content)); }

inline DesignSpec read_spec(std::string_view content) {
  auto doc = parse_design_document(content);
  if (!doc.spec) throw FormatError(0, "spec file has no [spec] section");
  return *doc.spec;
}

// Reads one resonator section; `section` may be empty when the file holds exactly one.
inline MbvdParams read_resonator(std::string_view content, const std::string& section = {}) {
  auto doc = parse_design_document(content);
  if (section.empty()) {
    if (doc.resonators.size() != 1) {
      throw FormatError(0, "expected exactly one resonator section, found " +
                               std::to_string(doc.resonators.size()));
    }
    validate(doc.resonators.begin()->second);
    return doc.resonators.begin()->second;
  }
  auto it = doc.resonators.find(section);
  if (it == doc.resonators.end()) throw FormatError(0, "no [" + section + "] section");
  validate(it->second);
  return it->second;
}

// Ladder element names must be the resonator section names and each element
// kind must match its name.
inline std::string write_design(const LadderDesign& design) {
  validate(design);
  std::string out;
  for (const auto& [name, p] : design.resonators) {
    if (name != "series" && name != "shunt") {
      throw DomainError("design files only carry resonators named 'series' or 'shunt'");
    }
  }
  for (const auto& e : design.elements) {
    if (e.resonator != to_string(e.kind)) {
      throw DomainError("element '" + e.resonator + "' does not match its kind");
    }
  }
  for (const char* name : {"series", "shunt"}) {
    auto it = design.resonators.find(name);
    if (it != design.resonators.end()) out += detail::resonator_block(name, it->second) + "\n";
  }
  out += "[filter]\nz0 = " + text::format_double(design.z0) + "\ntopology = ";
  for (std::size_t i = 0; i < design.elements.size(); ++i) {
    out += (i ? ", " : "") + design.elements[i].resonator;
  }
  out += "\n";
  return out;
}

inline std::string write_resonator(const MbvdParams& p, const std::string& section = "series") {
  if (section != "series" && section != "shunt") {
    throw DomainError("resonator section must be 'series' or 'shunt'");
  }
  return detail::resonator_block(section, p);
}

inline std::string write_spec(const DesignSpec& spec) {
  std::string out = "[spec]\n";
  DesignSpec copy = spec;
  for (const auto& k : detail::kSpecKeys) {
    out += std::string(k.key) + " = " + text::format_double(*detail::spec_field(copy, k.key)) + "\n";
  }
  return out;
}

// Overrides one numeric value addressed as "section.key" (sweeps).
inline void set_document_value(DesignDocument& doc, std::string_view path, double value) {
  const auto dot = path.find('.');
  if (dot == std::string_view::npos) throw DomainError("parameter must be 'section.key'");
  const std::string section(path.substr(0, dot));
  const std::string key(path.substr(dot + 1));
  if (section == "series" || section == "shunt") {
    auto it = doc.resonators.find(section);
    if (it == doc.resonators.end()) throw DomainError("document has no [" + section + "] section");
    double* slot = detail::resonator_field(it->second, key);
    if (!slot) throw DomainError("unknown resonator key '" + key + "'");
    *slot = value;
  } else if (section == "filter" && key == "z0") {
    if (!doc.filter) throw DomainError("document has no [filter] section");
    doc.filter->z0 = value;
  } else if (section == "spec") {
    if (!doc.spec) throw DomainError("document has no [spec] section");
    double* slot = detail::spec_field(*doc.spec, key);
    if (!slot) throw DomainError("unknown spec key '" + key + "'");
    *slot = value;
  } else {
    throw DomainError("cannot sweep '" + std::string(path) + "'");
  }
}

}  // namespace mmw
