#pragma once

// Exact arithmetic on finite integer combinations of roots of unity.
//
// A CycElement of level L is a vector c_0..c_{L-1} standing for
// sum_j c_j * zeta_L^j with zeta_L = exp(2 pi i / L), i.e. an element of the
// group ring Z[x]/(x^L - 1). The representation is redundant; two elements
// are equal when their difference vanishes modulo the L-th cyclotomic
// polynomial.

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "menon/arith.hpp"

namespace menon {

/// exp(2 pi i num / den), with 0 <= num < den and gcd(num, den) = 1.
class AngleFraction {
 public:
  AngleFraction() = default;
  /// Reduces num/den modulo 1 and to lowest terms. den must be positive.
  AngleFraction(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  /// Angle addition, i.e. multiplication of the roots of unity.
  AngleFraction operator+(const AngleFraction& other) const;
  AngleFraction operator-() const { return {-num_, den_}; }
  /// Index of this root at level L; den must divide L.
  std::int64_t index_at(std::int64_t level) const;

  std::string to_string() const;

  friend bool operator==(const AngleFraction&, const AngleFraction&) = default;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Value of a Dirichlet or additive character: zero or a root of unity.
class CharValue {
 public:
  static CharValue zero() { return CharValue(); }
  static CharValue root(AngleFraction angle) { return CharValue(angle); }
  static CharValue one() { return CharValue(AngleFraction(0, 1)); }

  bool is_zero() const { return !angle_.has_value(); }
  /// Precondition: !is_zero().
  const AngleFraction& angle() const { return *angle_; }

  CharValue operator*(const CharValue& other) const;

  /// "0" for zero, otherwise "num/den".
  std::string to_string() const;

  friend bool operator==(const CharValue&, const CharValue&) = default;

 private:
  CharValue() = default;
  explicit CharValue(AngleFraction a) : angle_(a) {}

  std::optional<AngleFraction> angle_;
};

class CycElement {
 public:
  /// The zero element of level L (L >= 1).
  explicit CycElement(std::int64_t level);
  CycElement(std::int64_t level, std::vector<BigInt> coeffs);

  static CycElement embed(const CharValue& value, std::int64_t level);
  static CycElement embed(const BigInt& value, std::int64_t level);

  std::int64_t level() const { return level_; }
  std::span<const BigInt> coeffs() const { return coeffs_; }
  const BigInt& coeff(std::int64_t index) const;

  /// Adds c at exponent index (reduced mod L).
  void add_at(std::int64_t index, const BigInt& c);

  /// Same element at a multiple level: index j moves to j * (target / L).
  CycElement lift(std::int64_t target) const;

  /// Sparse (index, coefficient) view of the nonzero coefficients.
  std::vector<std::pair<std::int64_t, BigInt>> terms() const;

  CycElement& operator+=(const CycElement& other);
  CycElement& operator-=(const CycElement& other);
  CycElement& operator*=(const BigInt& c);

  friend CycElement operator+(CycElement a, const CycElement& b) { return a += b; }
  friend CycElement operator-(CycElement a, const CycElement& b) { return a -= b; }
  friend CycElement operator*(CycElement a, const BigInt& c) { return a *= c; }
  friend CycElement operator*(const CycElement& a, const CycElement& b);

  /// Raw representative equality (same coefficient vector). Use equals() for
  /// equality of the represented complex numbers.
  bool same_representative(const CycElement& other) const {
    return level_ == other.level_ && coeffs_ == other.coeffs_;
  }

 private:
  void require_same_level(const CycElement& other, const char* op) const;

  std::int64_t level_;
  std::vector<BigInt> coeffs_;
};

CycElement scale(const CycElement& a, const BigInt& c);

/// Phi_L as ascending integer coefficients (monic, degree phi(L)). Memoized.
std::vector<BigInt> cyclotomic_polynomial(std::int64_t level);

/// Remainder of sum_j coeffs[j] x^j modulo Phi_L, as phi(L) coefficients.
std::vector<BigInt> reduce_mod_cyclotomic(std::span<const BigInt> coeffs, std::int64_t level);

bool is_zero(const CycElement& a);
/// Throws std::invalid_argument on level mismatch; lift both to a common level first.
bool equals(const CycElement& a, const CycElement& b);

std::complex<double> to_complex(const CycElement& a);

/// Least common level of a and b, both lifted there.
std::pair<CycElement, CycElement> common_level(const CycElement& a, const CycElement& b);

namespace fault {
/// Replaces the memoized Phi_L. Fault injection for self-test fixtures only.
void override_cyclotomic_polynomial(std::int64_t level, std::vector<BigInt> coeffs);
/// Drops every memoized polynomial, including overrides.
void clear_cyclotomic_cache();
}  // namespace fault

}  // namespace menon
