#include "menon/chars.hpp"

#include <charconv>
#include <map>
#include <mutex>
#include <stdexcept>

namespace menon {
namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t pow_mod(std::int64_t base, std::int64_t exp, std::int64_t m) {
  __int128 result = 1 % m;
  __int128 b = floor_mod(base, m);
  while (exp > 0) {
    if (exp & 1) result = result * b % m;
    b = b * b % m;
    exp >>= 1;
  }
  return static_cast<std::int64_t>(result);
}

// Smallest primitive root modulo an odd prime power q = p^e.
std::int64_t smallest_primitive_root(std::int64_t q, std::int64_t phi) {
  const auto phi_primes = factorize(phi).factors;
  for (std::int64_t g = 2; g < q; ++g) {
    if (gcd_all({g, q}) != 1) continue;
    bool primitive = true;
    for (const auto& pe : phi_primes) {
      if (pow_mod(g, phi / pe.prime, q) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) return g;
  }
  throw std::logic_error("no primitive root mod " + std::to_string(q));
}

// x = r (mod q), x = 1 (mod n / q).
std::int64_t crt_lift(std::int64_t r, std::int64_t q, std::int64_t n) {
  const std::int64_t rest = n / q;
  if (rest == 1) return floor_mod(r, n);
  for (std::int64_t x = floor_mod(r, q); x < n; x += q) {
    if (x % rest == 1 % rest) return x;
  }
  throw std::logic_error("crt_lift failed");
}

std::int64_t parse_int(std::string_view s, const char* what) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument(std::string("invalid ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

UnitGroup::UnitGroup(std::int64_t n) : n_(n) {
  if (n < 1 || n > kMaxModulus) {
    throw std::invalid_argument("unit_group: modulus must be in [1, " + std::to_string(kMaxModulus) +
                                "], got " + std::to_string(n));
  }
  for (const auto& [p, e] : factorize(n).factors) {
    UnitGroupComponent c{checked_pow(p, static_cast<unsigned>(e)), {}, {}};
    if (p == 2) {
      if (e == 2) {
        c.generators = {3};
        c.orders = {2};
      } else if (e >= 3) {
        c.generators = {c.prime_power - 1, 5};
        c.orders = {2, c.prime_power / 4};
      }
    } else {
      const std::int64_t phi_q = c.prime_power / p * (p - 1);
      c.generators = {smallest_primitive_root(c.prime_power, phi_q)};
      c.orders = {phi_q};
    }
    for (std::size_t i = 0; i < c.generators.size(); ++i) {
      generators_.push_back(crt_lift(c.generators[i], c.prime_power, n));
      orders_.push_back(c.orders[i]);
      phi_ *= c.orders[i];
      exponent_ = lcm(exponent_, c.orders[i]);
    }
    components_.push_back(std::move(c));
  }

  const std::size_t r = generators_.size();
  slot_.assign(static_cast<std::size_t>(n), -1);
  logs_.assign(static_cast<std::size_t>(phi_) * r, 0);
  // Walk the exponent vectors in mixed-radix order, last generator fastest.
  std::vector<std::int64_t> e(r, 0);
  for (std::int64_t row = 0; row < phi_; ++row) {
    const std::int64_t a = from_exponents(e);
    if (slot_[static_cast<std::size_t>(a)] != -1) {
      throw std::logic_error("unit_group: generators are not independent mod " + std::to_string(n));
    }
    slot_[static_cast<std::size_t>(a)] = static_cast<std::int32_t>(row);
    std::copy(e.begin(), e.end(), logs_.begin() + static_cast<std::ptrdiff_t>(row * static_cast<std::int64_t>(r)));
    for (std::size_t i = r; i-- > 0;) {
      if (++e[i] < orders_[i]) break;
      e[i] = 0;
    }
  }
  for (std::int64_t a = 1; a <= n; ++a) {
    if (is_unit(a)) units_.push_back(a);
  }
  if (static_cast<std::int64_t>(units_.size()) != phi_) {
    throw std::logic_error("unit_group: log table does not cover the units mod " + std::to_string(n));
  }
}

bool UnitGroup::is_unit(std::int64_t a) const {
  return slot_[static_cast<std::size_t>(floor_mod(a, n_))] >= 0;
}

std::span<const std::int64_t> UnitGroup::log(std::int64_t a) const {
  const std::int32_t row = slot_[static_cast<std::size_t>(floor_mod(a, n_))];
  if (row < 0) {
    throw std::invalid_argument(std::to_string(a) + " is not a unit mod " + std::to_string(n_));
  }
  const std::size_t r = rank();
  return std::span<const std::int64_t>(logs_).subspan(static_cast<std::size_t>(row) * r, r);
}

std::int64_t UnitGroup::from_exponents(std::span<const std::int64_t> exponents) const {
  if (exponents.size() != generators_.size()) {
    throw std::invalid_argument("from_exponents: expected " + std::to_string(rank()) + " exponents");
  }
  __int128 out = 1 % n_;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    out = out * pow_mod(generators_[i], floor_mod(exponents[i], orders_[i]), n_) % n_;
  }
  return static_cast<std::int64_t>(out);
}

std::shared_ptr<const UnitGroup> unit_group(std::int64_t n) {
  static std::mutex mu;
  static std::map<std::int64_t, std::shared_ptr<const UnitGroup>> groups;
  {
    std::lock_guard lock(mu);
    if (auto it = groups.find(n); it != groups.end()) return it->second;
  }
  auto group = std::make_shared<const UnitGroup>(n);
  std::lock_guard lock(mu);
  return groups.emplace(n, std::move(group)).first->second;
}

std::int64_t group_exponent(std::int64_t n) { return unit_group(n)->exponent(); }

DirichletCharacter::DirichletCharacter(std::shared_ptr<const UnitGroup> group,
                                       std::vector<std::int64_t> exponents)
    : group_(std::move(group)), exponents_(std::move(exponents)) {
  if (exponents_.size() != group_->rank()) {
    throw std::invalid_argument("character mod " + std::to_string(group_->modulus()) + " needs " +
                                std::to_string(group_->rank()) + " exponents, got " +
                                std::to_string(exponents_.size()));
  }
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    exponents_[i] = floor_mod(exponents_[i], group_->orders()[i]);
  }
}

DirichletCharacter DirichletCharacter::principal(std::int64_t n) {
  auto g = unit_group(n);
  std::vector<std::int64_t> e(g->rank(), 0);
  return {std::move(g), std::move(e)};
}

DirichletCharacter DirichletCharacter::from_index(std::int64_t n, std::int64_t index) {
  auto g = unit_group(n);
  if (index < 0 || index >= g->phi()) {
    throw std::invalid_argument("character index " + std::to_string(index) + " out of range for modulus " +
                                std::to_string(n) + " (0.." + std::to_string(g->phi() - 1) + ")");
  }
  std::vector<std::int64_t> e(g->rank(), 0);
  for (std::size_t i = e.size(); i-- > 0;) {
    e[i] = index % g->orders()[i];
    index /= g->orders()[i];
  }
  return {std::move(g), std::move(e)};
}

std::int64_t DirichletCharacter::index() const {
  std::int64_t out = 0;
  for (std::size_t i = 0; i < exponents_.size(); ++i) out = out * group_->orders()[i] + exponents_[i];
  return out;
}

bool DirichletCharacter::is_principal() const {
  for (std::int64_t e : exponents_) {
    if (e != 0) return false;
  }
  return true;
}

std::int64_t DirichletCharacter::order() const {
  std::int64_t out = 1;
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    const std::int64_t o = group_->orders()[i];
    out = lcm(out, o / gcd_all({exponents_[i], o}));
  }
  return out;
}

std::int64_t DirichletCharacter::value_index(std::int64_t a, std::int64_t level) const {
  if (!group_->is_unit(a)) return -1;
  const std::int64_t exp = group_->exponent();
  if (level % exp != 0) {
    throw std::invalid_argument("value_index: level " + std::to_string(level) +
                                " is not a multiple of the group exponent " + std::to_string(exp));
  }
  const auto logs = group_->log(a);
  std::int64_t num = 0;
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    num = (num + exponents_[i] * logs[i] % group_->orders()[i] * (exp / group_->orders()[i])) % exp;
  }
  return num * (level / exp);
}

CharValue DirichletCharacter::operator()(std::int64_t a) const {
  const std::int64_t exp = group_->exponent();
  const std::int64_t idx = value_index(a, exp);
  if (idx < 0) return CharValue::zero();
  return CharValue::root(AngleFraction(idx, exp));
}

DirichletCharacter DirichletCharacter::operator*(const DirichletCharacter& other) const {
  if (modulus() != other.modulus()) {
    throw std::invalid_argument("character product: moduli differ");
  }
  std::vector<std::int64_t> e = exponents_;
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.exponents_[i];
  return {group_, std::move(e)};
}

std::string DirichletCharacter::label() const {
  return std::to_string(modulus()) + ":" + std::to_string(index());
}

std::vector<DirichletCharacter> enumerate_characters(std::int64_t n) {
  const auto g = unit_group(n);
  std::vector<DirichletCharacter> out;
  out.reserve(static_cast<std::size_t>(g->phi()));
  for (std::int64_t i = 0; i < g->phi(); ++i) out.push_back(DirichletCharacter::from_index(n, i));
  return out;
}

std::int64_t conductor(const DirichletCharacter& chi) {
  const std::int64_t n = chi.modulus();
  const std::int64_t exp = chi.group().exponent();
  for (std::int64_t d : divisors(n)) {
    bool trivial = true;
    for (std::int64_t a = 1; a <= n && trivial; a += d) {
      const std::int64_t idx = chi.value_index(a, exp);
      if (idx > 0) trivial = false;
    }
    if (trivial) return d;
  }
  return n;
}

bool is_primitive(const DirichletCharacter& chi) { return conductor(chi) == chi.modulus(); }

std::int64_t lift_unit(std::int64_t a, std::int64_t d, std::int64_t n) {
  if (d < 1 || n < 1 || n % d != 0) {
    throw std::invalid_argument("lift_unit: " + std::to_string(d) + " does not divide " + std::to_string(n));
  }
  if (gcd_all({a, d}) != 1) {
    throw std::invalid_argument("lift_unit: " + std::to_string(a) + " is not a unit mod " + std::to_string(d));
  }
  std::int64_t b = floor_mod(a, d);
  if (b == 0) b = d;
  for (; b <= n + d; b += d) {
    if (gcd_all({b, n}) == 1) return b;
  }
  throw std::logic_error("lift_unit: no unit lift found");
}

DirichletCharacter induce_primitive(const DirichletCharacter& chi) {
  const std::int64_t n = chi.modulus();
  const std::int64_t d = conductor(chi);
  auto g = unit_group(d);
  std::vector<std::int64_t> e(g->rank(), 0);
  for (std::size_t i = 0; i < e.size(); ++i) {
    const CharValue v = chi(lift_unit(g->generators()[i], d, n));
    const std::int64_t order = g->orders()[i];
    if (order % v.angle().den() != 0) {
      throw std::logic_error("induce_primitive: value " + v.to_string() + " incompatible with generator order " +
                             std::to_string(order));
    }
    e[i] = v.angle().num() * (order / v.angle().den());
  }
  return {std::move(g), std::move(e)};
}

AdditiveCharacter::AdditiveCharacter(std::int64_t n, std::int64_t w)
    : n_(n), weight_(w), reduced_(0) {
  if (n < 1) throw std::invalid_argument("additive character: modulus must be >= 1");
  reduced_ = floor_mod(w, n);
}

CharValue AdditiveCharacter::operator()(std::int64_t b) const {
  const __int128 num = static_cast<__int128>(reduced_) * floor_mod(b, n_) % n_;
  return CharValue::root(AngleFraction(static_cast<std::int64_t>(num), n_));
}

DirichletCharacter parse_character(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("character '" + std::string(text) + "' must look like n:index or n:[e1,...]");
  }
  const std::int64_t n = parse_int(text.substr(0, colon), "modulus");
  if (n < 1 || n > UnitGroup::kMaxModulus) {
    throw std::invalid_argument("character modulus out of range: " + std::to_string(n));
  }
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  if (!rest.empty() && rest.front() == '[') {
    if (rest.back() != ']') throw std::invalid_argument("unterminated exponent vector in '" + std::string(text) + "'");
    rest = rest.substr(1, rest.size() - 2);
    std::vector<std::int64_t> e;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      e.push_back(parse_int(rest.substr(0, comma), "exponent"));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    return {unit_group(n), std::move(e)};
  }
  return DirichletCharacter::from_index(n, parse_int(rest, "character index"));
}

}  // namespace menon
