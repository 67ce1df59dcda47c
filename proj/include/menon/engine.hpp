#pragma once

// Brute-force and closed-form evaluators for the gcd-sum identities with
// Dirichlet and additive character twists, and exact comparison of the two.
//
// The general sum is
//
//   V = sum_{a_1..a_m, b_1..b_k = 1..n} F(gcd(a_1 - s_1, ..., a_m - s_m, b_1, ..., b_k, n))
//           * chi_1(a_1) ... chi_m(a_m) * lambda_1(b_1) ... lambda_k(b_k)
//
// and its closed form is
//
//   phi(n)^m chi*_1(s_1) ... chi*_m(s_m)
//     * sum_{e | (n, n/d_1, ..., n/d_m, w_1, ..., w_k), gcd(n/e, s_j) = 1 for all j}
//           e^k (mu * F)(n/e) / phi(n/e)^m
//
// where d_j is the conductor of chi_j and chi*_j the primitive character
// inducing it.

#include <atomic>
#include <chrono>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "menon/arith.hpp"
#include "menon/chars.hpp"
#include "menon/cyclo.hpp"

namespace menon {

/// Thrown when a brute-force evaluation would exceed its loop budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a closed-form division that must be exact is not.
class IntegralityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct IntegralityStats {
  std::uint64_t checks = 0;
  std::uint64_t failures = 0;
};

/// Process-wide counters of exact-division checks made by the closed forms.
IntegralityStats integrality_stats();
void reset_integrality_stats();

/// Default brute-force loop budget.
inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

struct IdentityInstance {
  std::int64_t n = 1;
  FunctionSpec f = FunctionSpec::identity();
  std::vector<DirichletCharacter> chars;  // m characters mod n
  std::vector<std::int64_t> shifts;       // s_1..s_m
  std::vector<std::int64_t> weights;      // w_1..w_k

  std::size_t m() const { return chars.size(); }
  std::size_t k() const { return weights.size(); }

  /// Throws std::invalid_argument when the shape is inconsistent.
  void validate() const;
};

/// lcm(n, exponent of (Z/nZ)^x): every character value mod n lives here.
std::int64_t instance_level(std::int64_t n);

/// n^(m+k), saturating; the brute-force evaluators refuse instances whose
/// cost exceeds their budget.
std::uint64_t brute_cost(const IdentityInstance& inst);

// Counting lemma: #{1 <= a <= n : (a, n) = 1, a = r (mod d), a = s (mod e)}.
std::int64_t lemma1_count_brute(std::int64_t n, std::int64_t d, std::int64_t e, std::int64_t r, std::int64_t s);
std::int64_t lemma1_count_closed(std::int64_t n, std::int64_t d, std::int64_t e, std::int64_t r, std::int64_t s);

/// sum_{a = s (mod e)} chi(a) for primitive chi; vanishes whenever e < n.
CycElement lemma2_residue_sum(const DirichletCharacter& chi, std::int64_t e, std::int64_t s);

/// sum_{1 <= a <= n, a = s (mod e)} chi(a), literally and in closed form.
CycElement lemma3_sum_brute(const DirichletCharacter& chi, std::int64_t e, std::int64_t s);
CycElement lemma3_sum_closed(const DirichletCharacter& chi, std::int64_t e, std::int64_t s);

/// sum_{1 <= b <= n, e | b} exp(2 pi i w b / n), at level n.
CycElement additive_collapse_brute(std::int64_t n, std::int64_t w, std::int64_t e);
CycElement additive_collapse_closed(std::int64_t n, std::int64_t w, std::int64_t e);

CycElement theorem2_lhs_brute(const IdentityInstance& inst, std::uint64_t budget = kDefaultBudget);
CycElement theorem2_rhs_closed(const IdentityInstance& inst);

/// Floating-point evaluations of the same two sides; accept real-valued F.
std::complex<double> theorem2_lhs_float(const IdentityInstance& inst, std::uint64_t budget = kDefaultBudget);
std::complex<double> theorem2_rhs_float(const IdentityInstance& inst);

/// One e of the divisor sum in the closed form together with its integer term.
struct StarredTerm {
  std::int64_t e;
  BigInt value;
  friend bool operator==(const StarredTerm&, const StarredTerm&) = default;
};

/// Before the substitution e -> n/e: e | n with d_j | e, gcd(e, s_j) = 1 and
/// (n/e) | w_l; term (mu*F)(e) (phi(n)/phi(e))^m (n/e)^k. Reported with e
/// replaced by n/e so both forms are indexed alike.
std::vector<StarredTerm> starred_terms_direct(const IdentityInstance& inst);
/// After it: e | gcd(n, n/d_j, w_l) with gcd(n/e, s_j) = 1; term
/// (mu*F)(n/e) e^k (phi(n)/phi(n/e))^m.
std::vector<StarredTerm> starred_terms_substituted(const IdentityInstance& inst);

/// phi(n) sigma_k(gcd(n/d, w_1, ..., w_k)), at the instance level.
CycElement theorem1_rhs(const DirichletCharacter& chi, const std::vector<std::int64_t>& weights);

/// sum_{(a, n) = 1} gcd(a - 1, n).
BigInt menon_sum(std::int64_t n);
/// sum_{a = 1..n} gcd(a - 1, n) chi(a), at the instance level.
CycElement twisted_menon_sum(const DirichletCharacter& chi);

enum class Mode { kExact, kFloat, kBoth };
Mode parse_mode(std::string_view text);
std::string to_string(Mode mode);

/// Absolute tolerance for float comparisons (scaled by max(1, |lhs|)).
inline constexpr double kFloatTolerance = 1e-6;

struct VerifyOptions {
  Mode mode = Mode::kExact;
  std::uint64_t budget = kDefaultBudget;
};

struct VerificationReport {
  std::string kind;  // "theorem2", "eq1", "eq2", "theorem1"
  IdentityInstance instance;
  std::vector<std::int64_t> conductors;
  Mode mode = Mode::kExact;
  std::optional<CycElement> lhs;
  std::optional<CycElement> rhs;
  std::complex<double> lhs_float;
  std::complex<double> rhs_float;
  bool equal = false;
  std::string lhs_method;
  std::string rhs_method;
  std::chrono::microseconds elapsed{0};
};

/// Brute LHS against closed RHS at the instance level.
VerificationReport verify(const IdentityInstance& inst, const VerifyOptions& options = {});

/// Menon's identity at n: direct sum against phi(n) tau(n), also checked
/// against the general evaluators on the same instance.
VerificationReport eq1_check(std::int64_t n);
/// Twisted identity: direct sum against phi(n) tau(n/d).
VerificationReport eq2_check(const DirichletCharacter& chi);
/// The k-fold additive identity with s = 1 and F = identity: brute against
/// phi(n) sigma_k(gcd(n/d, w_1..w_k)).
VerificationReport theorem1_check(const DirichletCharacter& chi, const std::vector<std::int64_t>& weights,
                                  std::uint64_t budget = kDefaultBudget);

}  // namespace menon
