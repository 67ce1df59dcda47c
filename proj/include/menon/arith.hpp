#pragma once

// Integer arithmetic functions: factorization, gcd conventions, the classical
// multiplicative functions and Dirichlet convolution against the Moebius
// function.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace menon {

using BigInt = boost::multiprecision::cpp_int;

/// Largest argument accepted by factorize() and everything built on it.
inline constexpr std::int64_t kFactorizeCap = 1'000'000'000;

struct PrimePower {
  std::int64_t prime;
  int exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
  std::int64_t n = 1;
  std::vector<PrimePower> factors;  // primes strictly ascending
};

/// Trial division. Throws std::invalid_argument unless 1 <= n <= kFactorizeCap.
Factorization factorize(std::int64_t n);

/// Nonnegative gcd with gcd(x, 0) = |x|; the empty gcd is 0.
std::int64_t gcd_all(std::span<const std::int64_t> xs);
std::int64_t gcd_all(std::initializer_list<std::int64_t> xs);

std::int64_t lcm(std::int64_t a, std::int64_t b);

std::int64_t euler_phi(std::int64_t n);
int mobius(std::int64_t n);
std::int64_t tau(std::int64_t n);
BigInt sigma_k(std::int64_t n, unsigned k);

/// All positive divisors of n, ascending.
std::vector<std::int64_t> divisors(std::int64_t n);

/// Integer power; throws std::overflow_error if the result leaves int64.
std::int64_t checked_pow(std::int64_t base, unsigned exp);

/// An integer-valued (or, for tables only, real-valued) arithmetic function.
///
/// Builtin kinds cover the functions the identities are usually stated for;
/// the table kind carries explicit values for 1..n_max and refuses any
/// argument outside that range.
class FunctionSpec {
 public:
  enum class Kind { kIdentity, kOne, kPower, kTau, kSigma, kPhi, kMobius, kTable };

  static FunctionSpec identity();
  static FunctionSpec one();
  static FunctionSpec power(unsigned j);
  static FunctionSpec tau();
  static FunctionSpec sigma(unsigned j);
  static FunctionSpec phi();
  static FunctionSpec mobius();
  static FunctionSpec table(std::vector<BigInt> values, std::string label = "table");
  /// Real-valued table; only usable by floating-point evaluation paths.
  static FunctionSpec real_table(std::vector<double> values, std::string label = "table");

  /// Parses a builtin name: identity | id | one | tau | phi | mobius | mu |
  /// power(j) | sigma(j). Throws std::invalid_argument on anything else.
  static FunctionSpec parse(std::string_view name);

  Kind kind() const { return kind_; }
  unsigned parameter() const { return param_; }
  bool is_integral() const { return kind_ != Kind::kTable || real_values_.empty(); }
  /// Largest argument a table can answer; 0 for builtins (unbounded).
  std::int64_t table_size() const;
  std::string name() const;

  /// F(n) exactly. Throws std::invalid_argument for n < 1, for arguments
  /// beyond a table, or when the function is real-valued.
  BigInt operator()(std::int64_t n) const;
  double evaluate_real(std::int64_t n) const;

 private:
  FunctionSpec(Kind kind, unsigned param) : kind_(kind), param_(param) {}

  void check_argument(std::int64_t n) const;

  Kind kind_;
  unsigned param_ = 0;
  std::string label_;
  std::vector<BigInt> values_;
  std::vector<double> real_values_;
};

/// (mu * F)(n) = sum over d | n of mu(d) F(n / d).
BigInt mu_star(const FunctionSpec& f, std::int64_t n);

}  // namespace menon
