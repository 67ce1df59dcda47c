#pragma once

// The unit group (Z/nZ)^x, Dirichlet characters with conductors and
// primitive induction, and additive characters of Z/nZ.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "menon/cyclo.hpp"

namespace menon {

/// One prime-power factor q of n with its generator convention:
/// odd p^e has the smallest primitive root, 2 has none, 4 has 3, and
/// 2^e (e >= 3) has the pair (q - 1, 5) of orders (2, 2^(e-2)).
struct UnitGroupComponent {
  std::int64_t prime_power;
  std::vector<std::int64_t> generators;  // residues mod prime_power
  std::vector<std::int64_t> orders;
};

/// CRT decomposition of (Z/nZ)^x with a full discrete-log table.
class UnitGroup {
 public:
  /// Desk cap on the modulus (the log table has phi(n) rows).
  static constexpr std::int64_t kMaxModulus = 1'000'000;

  explicit UnitGroup(std::int64_t n);

  std::int64_t modulus() const { return n_; }
  std::int64_t phi() const { return phi_; }
  /// lcm of the generator orders.
  std::int64_t exponent() const { return exponent_; }
  const std::vector<UnitGroupComponent>& components() const { return components_; }

  /// Generators across all components, CRT-lifted to residues mod n.
  std::span<const std::int64_t> generators() const { return generators_; }
  std::span<const std::int64_t> orders() const { return orders_; }
  std::size_t rank() const { return generators_.size(); }

  /// Units 1..n (for n = 1 this is {1}), ascending.
  std::span<const std::int64_t> units() const { return units_; }

  bool is_unit(std::int64_t a) const;
  /// Exponent vector of a unit; throws std::invalid_argument for non-units.
  std::span<const std::int64_t> log(std::int64_t a) const;
  /// prod g_i^{e_i} mod n.
  std::int64_t from_exponents(std::span<const std::int64_t> exponents) const;

 private:
  std::int64_t n_;
  std::int64_t phi_ = 1;
  std::int64_t exponent_ = 1;
  std::vector<UnitGroupComponent> components_;
  std::vector<std::int64_t> generators_;
  std::vector<std::int64_t> orders_;
  std::vector<std::int64_t> units_;
  std::vector<std::int32_t> slot_;  // residue -> row in logs_, -1 off the units
  std::vector<std::int64_t> logs_;  // phi rows of rank entries
};

/// Shared, memoized unit group; safe to call concurrently.
std::shared_ptr<const UnitGroup> unit_group(std::int64_t n);

std::int64_t group_exponent(std::int64_t n);

class DirichletCharacter {
 public:
  /// Exponents are reduced modulo the generator orders.
  DirichletCharacter(std::shared_ptr<const UnitGroup> group, std::vector<std::int64_t> exponents);

  static DirichletCharacter principal(std::int64_t n);
  /// Character number `index` in enumerate_characters(n) order.
  static DirichletCharacter from_index(std::int64_t n, std::int64_t index);

  std::int64_t modulus() const { return group_->modulus(); }
  const UnitGroup& group() const { return *group_; }
  const std::vector<std::int64_t>& exponents() const { return exponents_; }
  /// Position in the mixed-radix enumeration (last generator fastest).
  std::int64_t index() const;
  bool is_principal() const;
  /// Multiplicative order of the character.
  std::int64_t order() const;

  CharValue operator()(std::int64_t a) const;
  /// Exponent index of chi(a) at `level` (a multiple of the group exponent),
  /// or -1 when chi(a) = 0.
  std::int64_t value_index(std::int64_t a, std::int64_t level) const;

  /// Pointwise product; both factors must share the modulus.
  DirichletCharacter operator*(const DirichletCharacter& other) const;

  /// "n:index".
  std::string label() const;

  friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
    return a.modulus() == b.modulus() && a.exponents_ == b.exponents_;
  }

 private:
  std::shared_ptr<const UnitGroup> group_;
  std::vector<std::int64_t> exponents_;
};

/// All phi(n) characters; index 0 is principal.
std::vector<DirichletCharacter> enumerate_characters(std::int64_t n);

/// Smallest d | n such that chi is trivial on units a = 1 (mod d).
std::int64_t conductor(const DirichletCharacter& chi);
bool is_primitive(const DirichletCharacter& chi);

/// Smallest b >= 1 with b = a (mod d) and gcd(b, n) = 1.
std::int64_t lift_unit(std::int64_t a, std::int64_t d, std::int64_t n);

/// The primitive character mod conductor(chi) inducing chi.
DirichletCharacter induce_primitive(const DirichletCharacter& chi);

/// b -> exp(2 pi i w b / n).
class AdditiveCharacter {
 public:
  AdditiveCharacter(std::int64_t n, std::int64_t w);

  std::int64_t modulus() const { return n_; }
  /// The weight as given.
  std::int64_t weight() const { return weight_; }
  /// weight mod n, in [0, n).
  std::int64_t reduced_weight() const { return reduced_; }

  CharValue operator()(std::int64_t b) const;

 private:
  std::int64_t n_;
  std::int64_t weight_;
  std::int64_t reduced_;
};

/// Parses "n:index" or "n:[e1,e2,...]".
DirichletCharacter parse_character(std::string_view text);

}  // namespace menon
