#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mmw/errors.hpp"
#include "mmw/grid.hpp"
#include "mmw/mbvd.hpp"

namespace mmw {

// Row-major 2x2 complex matrix; used for both ABCD and scattering entries.
struct Matrix2 {
  Complex m11{1.0, 0.0};
  Complex m12{0.0, 0.0};
  Complex m21{0.0, 0.0};
  Complex m22{1.0, 0.0};

  static Matrix2 identity() { return {}; }

  Complex det() const { return m11 * m22 - m12 * m21; }

  bool finite() const {
    auto ok = [](Complex v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); };
    return ok(m11) && ok(m12) && ok(m21) && ok(m22);
  }

  friend Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
    return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
            a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
  }

  friend bool operator==(const Matrix2&, const Matrix2&) = default;
};

// Largest singular value of a 2x2 matrix, from the eigenvalues of M^H M.
inline double max_singular_value(const Matrix2& m) {
  const double frob2 = std::norm(m.m11) + std::norm(m.m12) + std::norm(m.m21) + std::norm(m.m22);
  const double det2 = std::norm(m.det());
  const double disc = std::max(0.0, frob2 * frob2 - 4.0 * det2);
  return std::sqrt(0.5 * (frob2 + std::sqrt(disc)));
}

// ABCD matrices on a grid, with one determinant per frequency. Determinants
// are tracked separately because AD - BC of a long cascade cancels badly in
// the stopband, while the product of the element determinants does not.
class AbcdBlock {
 public:
  AbcdBlock() = default;
  AbcdBlock(FrequencyGrid grid, std::vector<Matrix2> matrices)
      : grid_(std::move(grid)), matrices_(std::move(matrices)) {
    check();
    determinants_.resize(matrices_.size());
    std::transform(matrices_.begin(), matrices_.end(), determinants_.begin(),
                   [](const Matrix2& m) { return m.det(); });
  }
  AbcdBlock(FrequencyGrid grid, std::vector<Matrix2> matrices, std::vector<Complex> determinants)
      : grid_(std::move(grid)), matrices_(std::move(matrices)), determinants_(std::move(determinants)) {
    check();
    if (determinants_.size() != matrices_.size()) throw DomainError("ABCD block: length mismatch");
  }

  static AbcdBlock identity(const FrequencyGrid& grid) {
    return AbcdBlock(grid, std::vector<Matrix2>(grid.size(), Matrix2::identity()));
  }

  const FrequencyGrid& grid() const noexcept { return grid_; }
  std::span<const Matrix2> matrices() const noexcept { return matrices_; }
  const Matrix2& operator[](std::size_t i) const { return matrices_[i]; }
  Complex determinant(std::size_t i) const { return determinants_[i]; }
  std::size_t size() const noexcept { return matrices_.size(); }

 private:
  void check() const {
    if (grid_.size() != matrices_.size()) throw DomainError("ABCD block: length mismatch");
    for (std::size_t i = 0; i < matrices_.size(); ++i) {
      if (!matrices_[i].finite()) {
        throw DomainError("ABCD block: non-finite matrix at " + std::to_string(grid_[i]) + " Hz");
      }
    }
  }

  FrequencyGrid grid_;
  std::vector<Matrix2> matrices_;
  std::vector<Complex> determinants_;
};

class SParameterBlock {
 public:
  SParameterBlock() = default;
  SParameterBlock(FrequencyGrid grid, std::vector<Matrix2> matrices, double z0)
      : grid_(std::move(grid)), matrices_(std::move(matrices)), z0_(z0) {
    if (!(z0_ > 0.0) || !std::isfinite(z0_)) throw DomainError("reference impedance must be > 0");
    if (grid_.size() != matrices_.size()) throw DomainError("S block: length mismatch");
  }

  const FrequencyGrid& grid() const noexcept { return grid_; }
  std::span<const Matrix2> matrices() const noexcept { return matrices_; }
  const Matrix2& operator[](std::size_t i) const { return matrices_[i]; }
  std::size_t size() const noexcept { return matrices_.size(); }
  double z0() const noexcept { return z0_; }

  ComplexCurve s11() const { return entry(&Matrix2::m11); }
  ComplexCurve s12() const { return entry(&Matrix2::m12); }
  ComplexCurve s21() const { return entry(&Matrix2::m21); }
  ComplexCurve s22() const { return entry(&Matrix2::m22); }

 private:
  ComplexCurve entry(Complex Matrix2::*member) const {
    std::vector<Complex> v(matrices_.size());
    std::transform(matrices_.begin(), matrices_.end(), v.begin(),
                   [member](const Matrix2& m) { return m.*member; });
    return ComplexCurve(grid_, std::move(v));
  }

  FrequencyGrid grid_;
  std::vector<Matrix2> matrices_;
  double z0_ = 50.0;
};

enum class ElementKind { Series, Shunt };

inline const char* to_string(ElementKind kind) {
  return kind == ElementKind::Series ? "series" : "shunt";
}

struct LadderElement {
  ElementKind kind = ElementKind::Series;
  std::string resonator;  // key into LadderDesign::resonators

  friend bool operator==(const LadderElement&, const LadderElement&) = default;
};

// Ordered two-port ladder, port 1 first. Elements reference shared resonator
// records by name, so identical resonators are one record.
struct LadderDesign {
  std::map<std::string, MbvdParams> resonators;
  std::vector<LadderElement> elements;
  double z0 = 50.0;

  friend bool operator==(const LadderDesign&, const LadderDesign&) = default;
};

inline void validate(const LadderDesign& design) {
  if (design.elements.empty()) throw DomainError("ladder design has no elements");
  if (!(design.z0 > 0.0) || !std::isfinite(design.z0)) {
    throw DomainError("ladder design needs z0 > 0");
  }
  for (const auto& e : design.elements) {
    auto it = design.resonators.find(e.resonator);
    if (it == design.resonators.end()) {
      throw DomainError("ladder element references unknown resonator '" + e.resonator + "'");
    }
    validate(it->second);
  }
}

// Shunt-series-shunt with both shunts sharing one record.
inline LadderDesign make_shunt_series_shunt(const MbvdParams& series, const MbvdParams& shunt,
                                            double z0 = 50.0) {
  LadderDesign d;
  d.resonators["series"] = series;
  d.resonators["shunt"] = shunt;
  d.elements = {{ElementKind::Shunt, "shunt"}, {ElementKind::Series, "series"},
                {ElementKind::Shunt, "shunt"}};
  d.z0 = z0;
  validate(d);
  return d;
}

inline LadderDesign reversed(LadderDesign design) {
  std::reverse(design.elements.begin(), design.elements.end());
  return design;
}

// Series elements take an impedance curve, shunt elements an admittance curve.
inline AbcdBlock element_abcd(ElementKind kind, const ComplexCurve& immittance) {
  if (immittance.size() == 0) throw DomainError("element ABCD needs a non-empty grid");
  std::vector<Matrix2> m(immittance.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (kind == ElementKind::Series) {
      m[i].m12 = immittance[i];
    } else {
      m[i].m21 = immittance[i];
    }
  }
  return AbcdBlock(immittance.grid(), std::move(m));
}

inline AbcdBlock element_abcd(ElementKind kind, const MbvdParams& p, const FrequencyGrid& grid) {
  if (grid.empty()) throw DomainError("element ABCD needs a non-empty grid");
  ComplexCurve y = resonator_admittance(p, grid);
  if (kind == ElementKind::Shunt) return element_abcd(kind, y);
  std::vector<Complex> z(y.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = 1.0 / y[i];
  return element_abcd(kind, ComplexCurve(grid, std::move(z)));
}

// Left-to-right product of blocks; every block must sit on `grid` exactly.
inline AbcdBlock cascade(const FrequencyGrid& grid, std::span<const AbcdBlock> blocks) {
  std::vector<Matrix2> acc(grid.size(), Matrix2::identity());
  std::vector<Complex> det(grid.size(), Complex(1.0, 0.0));
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (!(blocks[b].grid() == grid)) {
      throw AlignmentError("cascade: block " + std::to_string(b) +
                           " is on a different frequency grid");
    }
    for (std::size_t i = 0; i < acc.size(); ++i) {
      acc[i] = acc[i] * blocks[b][i];
      det[i] *= blocks[b].determinant(i);
    }
  }
  return AbcdBlock(grid, std::move(acc), std::move(det));
}

inline SParameterBlock abcd_to_s(const AbcdBlock& block, double z0) {
  if (!(z0 > 0.0) || !std::isfinite(z0)) throw DomainError("reference impedance must be > 0");
  std::vector<Matrix2> s(block.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Matrix2& t = block[i];
    const Complex a = t.m11, b = t.m12 / z0, c = t.m21 * z0, d = t.m22;
    const Complex delta = a + b + c + d;
    if (std::abs(delta) == 0.0 || !std::isfinite(std::abs(delta))) {
      throw SingularConversionError(block.grid()[i], "ABCD to S conversion is singular at " +
                                                         std::to_string(block.grid()[i]) + " Hz");
    }
    s[i].m11 = (a + b - c - d) / delta;
    s[i].m12 = 2.0 * block.determinant(i) / delta;
    s[i].m21 = 2.0 / delta;
    s[i].m22 = (-a + b - c + d) / delta;
  }
  return SParameterBlock(block.grid(), std::move(s), z0);
}

inline SParameterBlock build_ladder_response(const LadderDesign& design, const FrequencyGrid& grid) {
  validate(design);
  std::vector<AbcdBlock> blocks;
  blocks.reserve(design.elements.size());
  for (const auto& e : design.elements) {
    blocks.push_back(element_abcd(e.kind, design.resonators.at(e.resonator), grid));
  }
  return abcd_to_s(cascade(grid, blocks), design.z0);
}

// One-port reflection <-> admittance, both referenced to z0.
inline Complex admittance_to_reflection(Complex y, double z0) { return (1.0 - y * z0) / (1.0 + y * z0); }

inline Complex reflection_to_admittance(Complex s11, double z0) {
  return (1.0 - s11) / (z0 * (1.0 + s11));
}

}  // namespace mmw
