#include "menon/selftest.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include "menon/engine.hpp"

namespace menon {
namespace {

using Check = std::function<std::optional<std::string>()>;

template <typename... Args>
std::string describe(Args&&... args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

std::vector<std::int64_t> shifts_for(std::int64_t n, std::initializer_list<std::int64_t> base) {
  std::vector<std::int64_t> out(base);
  out.push_back(n - 1);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CycElement random_element(std::mt19937_64& rng, std::int64_t level, int density) {
  CycElement out(level);
  for (std::int64_t j = 0; j < level; ++j) {
    if (static_cast<int>(rng() % 100) < density) out.add_at(j, static_cast<std::int64_t>(rng() % 7) - 3);
  }
  return out;
}

// A representative of zero: Phi_L times a random polynomial, folded mod x^L - 1.
CycElement random_zero(std::mt19937_64& rng, std::int64_t level) {
  const auto phi = cyclotomic_polynomial(level);
  const CycElement r = random_element(rng, level, 30);
  CycElement out(level);
  for (const auto& [j, c] : r.terms()) {
    for (std::size_t i = 0; i < phi.size(); ++i) out.add_at(j + static_cast<std::int64_t>(i), c * phi[i]);
  }
  return out;
}

// ---- arith ----------------------------------------------------------------

std::optional<std::string> check_reconstruction() {
  const std::vector<FunctionSpec> fs = {FunctionSpec::identity(), FunctionSpec::one(), FunctionSpec::power(2),
                                        FunctionSpec::tau(),      FunctionSpec::sigma(1), FunctionSpec::phi(),
                                        FunctionSpec::mobius()};
  for (const auto& f : fs) {
    for (std::int64_t n = 1; n <= 200; ++n) {
      BigInt sum = 0;
      for (std::int64_t e : divisors(n)) sum += mu_star(f, e);
      if (sum != f(n)) return describe(f.name(), " fails reconstruction at n=", n);
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_multiplicativity() {
  for (std::int64_t a = 1; a <= 100; ++a) {
    for (std::int64_t b = 1; b <= 100; ++b) {
      if (gcd_all({a, b}) != 1) continue;
      if (euler_phi(a * b) != euler_phi(a) * euler_phi(b)) return describe("phi at ", a, ",", b);
      if (tau(a * b) != tau(a) * tau(b)) return describe("tau at ", a, ",", b);
      if (mobius(a * b) != mobius(a) * mobius(b)) return describe("mu at ", a, ",", b);
      for (unsigned k = 0; k <= 3; ++k) {
        if (sigma_k(a * b, k) != sigma_k(a, k) * sigma_k(b, k)) return describe("sigma_", k, " at ", a, ",", b);
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_phi_divisor_sum() {
  for (std::int64_t n = 1; n <= 500; ++n) {
    std::int64_t sum = 0;
    for (std::int64_t d : divisors(n)) sum += euler_phi(d);
    if (sum != n) return describe("sum of phi(d) over d | ", n, " is ", sum);
    for (std::int64_t e : divisors(n)) {
      if (euler_phi(n) % euler_phi(n / e) != 0) return describe("phi(", n / e, ") does not divide phi(", n, ")");
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_gcd_all() {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<std::int64_t> xs(rng() % 6);
    for (auto& x : xs) x = static_cast<std::int64_t>(rng() % 201) - 100;
    const std::int64_t g = gcd_all(xs);
    auto ys = xs;
    std::shuffle(ys.begin(), ys.end(), rng);
    for (auto& y : ys) {
      if (rng() % 2) y = -y;
    }
    ys.push_back(0);
    if (g < 0 || gcd_all(ys) != g) return describe("gcd_all not invariant on trial ", trial);
  }
  return std::nullopt;
}

// ---- cyclo ----------------------------------------------------------------

std::optional<std::string> check_cyclotomic_products() {
  for (std::int64_t level = 1; level <= 60; ++level) {
    const auto phi = cyclotomic_polynomial(level);
    if (static_cast<std::int64_t>(phi.size()) - 1 != euler_phi(level)) {
      return describe("deg Phi_", level, " != phi(", level, ")");
    }
    std::vector<BigInt> prod{1};
    for (std::int64_t d : divisors(level)) {
      const auto f = cyclotomic_polynomial(d);
      std::vector<BigInt> next(prod.size() + f.size() - 1);
      for (std::size_t i = 0; i < prod.size(); ++i) {
        for (std::size_t j = 0; j < f.size(); ++j) next[i + j] += prod[i] * f[j];
      }
      prod = std::move(next);
    }
    std::vector<BigInt> expect(static_cast<std::size_t>(level) + 1);
    expect.front() = -1;
    expect.back() = 1;
    if (prod != expect) return describe("product of Phi_d over d | ", level, " is not x^L - 1");
  }
  return std::nullopt;
}

std::optional<std::string> check_congruence() {
  std::mt19937_64 rng(11);
  for (std::int64_t level = 1; level <= 36; ++level) {
    for (int trial = 0; trial < 8; ++trial) {
      const CycElement a = random_element(rng, level, 40);
      const CycElement b = a + random_zero(rng, level);
      const CycElement c = random_element(rng, level, 40);
      if (!equals(a, a) || !equals(a, b) || !equals(b, a)) return describe("equals not an equivalence at L=", level);
      if (!equals(a + c, b + c)) return describe("additive congruence fails at L=", level);
      if (!equals(a * c, b * c)) return describe("multiplicative congruence fails at L=", level);
      const CycElement d = b + random_zero(rng, level);
      if (!equals(a, d)) return describe("transitivity fails at L=", level);
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_exact_float_coupling() {
  std::mt19937_64 rng(13);
  for (std::int64_t level = 1; level <= 36; ++level) {
    for (int trial = 0; trial < 8; ++trial) {
      const CycElement z = random_zero(rng, level);
      if (!is_zero(z)) return describe("multiple of Phi_", level, " not recognised as zero");
      if (std::abs(to_complex(z)) >= 1e-9) return describe("exact zero has float modulus >= 1e-9 at L=", level);
      // Nonzero canonical element: degree below phi(L).
      std::vector<BigInt> coeffs(static_cast<std::size_t>(level));
      bool any = false;
      for (std::int64_t j = 0; j < euler_phi(level); ++j) {
        coeffs[static_cast<std::size_t>(j)] = static_cast<std::int64_t>(rng() % 7) - 3;
        any = any || coeffs[static_cast<std::size_t>(j)] != 0;
      }
      if (!any) coeffs[0] = 1;
      const CycElement nz(level, coeffs);
      if (is_zero(nz)) return describe("canonical nonzero element reported zero at L=", level);
      if (std::abs(to_complex(nz)) <= 1e-9) return describe("canonical nonzero element has tiny modulus at L=", level);
      // Lifting preserves zero-ness.
      if (is_zero(z.lift(level * 2)) != true || is_zero(nz.lift(level * 3)) != false) {
        return describe("lift changed zero-ness at L=", level);
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_embed_multiplicative() {
  for (std::int64_t level = 1; level <= 36; ++level) {
    for (std::int64_t d1 : divisors(level)) {
      for (std::int64_t d2 : divisors(level)) {
        for (std::int64_t a = 0; a < d1; ++a) {
          const CharValue p = CharValue::root(AngleFraction(a, d1));
          const CharValue q = CharValue::root(AngleFraction(1 + a * 5, d2));
          if (!equals(CycElement::embed(p * q, level), CycElement::embed(p, level) * CycElement::embed(q, level))) {
            return describe("embed not multiplicative at L=", level);
          }
        }
      }
    }
  }
  return std::nullopt;
}

// ---- chars ----------------------------------------------------------------

std::optional<std::string> check_character_multiplicativity() {
  for (std::int64_t n = 1; n <= 60; ++n) {
    const auto units = unit_group(n)->units();
    for (const auto& chi : enumerate_characters(n)) {
      for (std::int64_t a : units) {
        for (std::int64_t b : units) {
          if (chi(a * b) != chi(a) * chi(b)) return describe(chi.label(), " not multiplicative at ", a, ",", b);
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_orthogonality() {
  for (std::int64_t n = 1; n <= 60; ++n) {
    const std::int64_t level = instance_level(n);
    for (const auto& chi : enumerate_characters(n)) {
      CycElement sum(level);
      for (std::int64_t a = 1; a <= n; ++a) sum += CycElement::embed(chi(a), level);
      const CycElement expect = CycElement::embed(BigInt(chi.is_principal() ? euler_phi(n) : 0), level);
      if (!equals(sum, expect)) return describe("orthogonality fails for ", chi.label());
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_induction() {
  for (std::int64_t n = 1; n <= 60; ++n) {
    for (const auto& chi : enumerate_characters(n)) {
      const auto star = induce_primitive(chi);
      const std::int64_t d = conductor(chi);
      if (star.modulus() != d) return describe("induced character of ", chi.label(), " has wrong modulus");
      if (conductor(star) != d || !is_primitive(star)) return describe("induced character of ", chi.label(), " not primitive");
      for (std::int64_t a : unit_group(n)->units()) {
        if (chi(a) != star(a)) return describe(chi.label(), " and its primitive differ at ", a);
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_lift_well_defined() {
  for (std::int64_t n = 1; n <= 40; ++n) {
    for (const auto& chi : enumerate_characters(n)) {
      const std::int64_t d = conductor(chi);
      for (std::int64_t a = 0; a < d; ++a) {
        if (gcd_all({a, d}) != 1) continue;
        const CharValue expect = chi(lift_unit(a, d, n));
        for (std::int64_t b = a; b <= n + d; b += d) {
          if (b >= 1 && gcd_all({b, n}) == 1 && chi(b) != expect) {
            return describe(chi.label(), " differs between lifts of ", a, " mod ", d);
          }
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_character_group() {
  for (std::int64_t n = 1; n <= 40; ++n) {
    const auto chars = enumerate_characters(n);
    for (const auto& x : chars) {
      for (const auto& y : chars) {
        const auto xy = x * y;
        if (std::find(chars.begin(), chars.end(), xy) == chars.end()) return describe("group not closed mod ", n);
        for (std::int64_t a : unit_group(n)->units()) {
          if (xy(a) != x(a) * y(a)) return describe("pointwise product mismatch mod ", n);
        }
      }
    }
  }
  return std::nullopt;
}

// ---- engine ---------------------------------------------------------------

std::optional<std::string> check_lemma1() {
  for (std::int64_t n = 1; n <= 36; ++n) {
    for (std::int64_t d : divisors(n)) {
      for (std::int64_t e : divisors(n)) {
        for (std::int64_t r = 0; r < n; ++r) {
          for (std::int64_t s = 0; s < n; ++s) {
            if (lemma1_count_brute(n, d, e, r, s) != lemma1_count_closed(n, d, e, r, s)) {
              return describe("counting lemma fails at n=", n, " d=", d, " e=", e, " r=", r, " s=", s);
            }
          }
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_lemma2() {
  for (std::int64_t n = 1; n <= 40; ++n) {
    for (const auto& chi : enumerate_characters(n)) {
      if (!is_primitive(chi)) continue;
      for (std::int64_t e : divisors(n)) {
        if (e == n) continue;
        for (std::int64_t s : shifts_for(n, {0, 1, 2})) {
          if (!is_zero(lemma2_residue_sum(chi, e, s))) {
            return describe("residue sum nonzero for ", chi.label(), " e=", e, " s=", s);
          }
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_lemma3() {
  for (std::int64_t n = 1; n <= 40; ++n) {
    for (const auto& chi : enumerate_characters(n)) {
      for (std::int64_t e : divisors(n)) {
        for (std::int64_t s : shifts_for(n, {0, 1, 2, 5})) {
          if (!equals(lemma3_sum_brute(chi, e, s), lemma3_sum_closed(chi, e, s))) {
            return describe("restricted character sum fails for ", chi.label(), " e=", e, " s=", s);
          }
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_additive_collapse() {
  for (std::int64_t n = 1; n <= 60; ++n) {
    for (std::int64_t e : divisors(n)) {
      for (std::int64_t w : shifts_for(n, {0, 1, 2, 3})) {
        if (!equals(additive_collapse_brute(n, w, e), additive_collapse_closed(n, w, e))) {
          return describe("additive collapse fails at n=", n, " w=", w, " e=", e);
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_general_identity() {
  const std::vector<FunctionSpec> fs = {FunctionSpec::identity(), FunctionSpec::one(), FunctionSpec::tau(),
                                        FunctionSpec::power(2)};
  for (std::int64_t n = 1; n <= 30; ++n) {
    for (const auto& chi : enumerate_characters(n)) {
      for (std::int64_t s : {0, 1, 2, -1, 5}) {
        for (const auto& f : fs) {
          IdentityInstance inst{n, f, {chi}, {s}, {}};
          if (!equals(theorem2_lhs_brute(inst), theorem2_rhs_closed(inst))) {
            return describe("m=1 k=0 mismatch: n=", n, " ", chi.label(), " s=", s, " F=", f.name());
          }
          for (std::int64_t w : {0, 1, 3}) {
            inst.weights = {w};
            if (!equals(theorem2_lhs_brute(inst), theorem2_rhs_closed(inst))) {
              return describe("m=1 k=1 mismatch: n=", n, " ", chi.label(), " s=", s, " w=", w, " F=", f.name());
            }
          }
        }
      }
    }
  }
  for (std::int64_t n = 1; n <= 16; ++n) {
    const auto chars = enumerate_characters(n);
    for (const auto& x : chars) {
      for (const auto& y : chars) {
        for (std::int64_t s1 : {1, 3}) {
          for (std::int64_t s2 : {1, 3}) {
            for (const auto& f : fs) {
              IdentityInstance inst{n, f, {x, y}, {s1, s2}, {}};
              if (!equals(theorem2_lhs_brute(inst), theorem2_rhs_closed(inst))) {
                return describe("m=2 k=0 mismatch at n=", n);
              }
              for (std::int64_t w : {0, 1, 3}) {
                inst.weights = {w};
                if (!equals(theorem2_lhs_brute(inst), theorem2_rhs_closed(inst))) {
                  return describe("m=2 k=1 mismatch at n=", n);
                }
              }
            }
          }
        }
      }
    }
  }
  return std::nullopt;
}

std::vector<std::vector<std::int64_t>> weight_tuples(std::size_t k, const std::vector<std::int64_t>& set) {
  std::vector<std::vector<std::int64_t>> out{{}};
  for (std::size_t l = 0; l < k; ++l) {
    std::vector<std::vector<std::int64_t>> next;
    for (const auto& t : out) {
      for (std::int64_t w : set) {
        next.push_back(t);
        next.back().push_back(w);
      }
    }
    out = std::move(next);
  }
  return out;
}

std::optional<std::string> check_specialization() {
  for (std::int64_t n = 1; n <= 60; ++n) {
    const std::int64_t level = instance_level(n);
    for (const auto& chi : enumerate_characters(n)) {
      const std::int64_t d = conductor(chi);
      for (std::size_t k = 0; k <= 2; ++k) {
        for (const auto& ws : weight_tuples(k, {0, 1, 2, 6})) {
          const IdentityInstance inst{n, FunctionSpec::identity(), {chi}, {1}, ws};
          const CycElement rhs = theorem2_rhs_closed(inst);
          if (!equals(rhs, theorem1_rhs(chi, ws))) {
            return describe("closed form differs from phi(n) sigma_k at n=", n, " ", chi.label(), " k=", k);
          }
          if (k == 0 && !equals(rhs, CycElement::embed(BigInt(euler_phi(n) * tau(n / d)), level))) {
            return describe("closed form differs from phi(n) tau(n/d) for ", chi.label());
          }
          if (k == 0 && chi.is_principal() &&
              !equals(rhs, CycElement::embed(BigInt(euler_phi(n) * tau(n)), level))) {
            return describe("closed form differs from phi(n) tau(n) at n=", n);
          }
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_substitution() {
  const std::vector<FunctionSpec> fs = {FunctionSpec::identity(), FunctionSpec::tau(), FunctionSpec::mobius()};
  for (std::int64_t n = 1; n <= 30; ++n) {
    const auto chars = enumerate_characters(n);
    for (const auto& chi : chars) {
      for (std::int64_t s : {0, 1, 2, -1, 5}) {
        for (const auto& f : fs) {
          for (const auto& ws : std::vector<std::vector<std::int64_t>>{{}, {0}, {1}, {3}, {0, 6}, {2, 4}}) {
            const IdentityInstance inst{n, f, {chi}, {s}, ws};
            if (starred_terms_direct(inst) != starred_terms_substituted(inst)) {
              return describe("index substitution changes the term set at n=", n, " ", chi.label(), " s=", s);
            }
          }
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_vanishing() {
  for (std::int64_t n = 1; n <= 30; ++n) {
    for (const auto& chi : enumerate_characters(n)) {
      const std::int64_t d = conductor(chi);
      for (std::int64_t s = -3; s <= n; ++s) {
        if (gcd_all({s, d}) == 1) continue;
        for (const auto& ws : std::vector<std::vector<std::int64_t>>{{}, {1}}) {
          const IdentityInstance inst{n, FunctionSpec::identity(), {chi}, {s}, ws};
          if (!is_zero(theorem2_lhs_brute(inst)) || !is_zero(theorem2_rhs_closed(inst))) {
            return describe("sum does not vanish for ", chi.label(), " s=", s);
          }
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<CheckResult> run_selftest(const std::function<void(const CheckResult&)>& on_result) {
  const std::vector<std::pair<std::string, Check>> checks = {
      {"arith.reconstruction", check_reconstruction},
      {"arith.multiplicativity", check_multiplicativity},
      {"arith.phi_divisor_sum", check_phi_divisor_sum},
      {"arith.gcd_all_invariance", check_gcd_all},
      {"cyclo.cyclotomic_products", check_cyclotomic_products},
      {"cyclo.ring_congruence", check_congruence},
      {"cyclo.exact_float_coupling", check_exact_float_coupling},
      {"cyclo.embed_multiplicative", check_embed_multiplicative},
      {"chars.multiplicativity", check_character_multiplicativity},
      {"chars.orthogonality", check_orthogonality},
      {"chars.primitive_induction", check_induction},
      {"chars.lift_well_defined", check_lift_well_defined},
      {"chars.character_group", check_character_group},
      {"engine.counting_lemma", check_lemma1},
      {"engine.primitive_residue_vanishing", check_lemma2},
      {"engine.restricted_character_sum", check_lemma3},
      {"engine.additive_collapse", check_additive_collapse},
      {"engine.general_identity_grid", check_general_identity},
      {"engine.specialization_chain", check_specialization},
      {"engine.index_substitution", check_substitution},
      {"engine.vanishing", check_vanishing},
  };
  std::vector<CheckResult> results;
  for (const auto& [name, check] : checks) {
    const auto start = std::chrono::steady_clock::now();
    CheckResult r{name, false, {}, {}};
    try {
      const auto failure = check();
      r.passed = !failure.has_value();
      if (failure) r.detail = *failure;
    } catch (const std::exception& e) {
      r.detail = std::string("exception: ") + e.what();
    }
    r.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace menon
