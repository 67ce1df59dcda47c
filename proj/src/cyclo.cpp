#include "menon/cyclo.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace menon {
namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// Memoized Phi_L together with a sparse copy of its non-leading terms for
// the int64 division fast path.
struct CyclotomicEntry {
  std::vector<BigInt> dense;
  std::vector<std::pair<std::size_t, BigInt>> lower_terms;
  bool small = true;
  std::vector<std::pair<std::size_t, std::int64_t>> lower_terms_small;
};

std::shared_ptr<const CyclotomicEntry> make_entry(std::vector<BigInt> dense) {
  auto entry = std::make_shared<CyclotomicEntry>();
  const std::size_t deg = dense.size() - 1;
  for (std::size_t j = 0; j < deg; ++j) {
    if (dense[j] == 0) continue;
    entry->lower_terms.emplace_back(j, dense[j]);
    if (dense[j] > std::numeric_limits<std::int64_t>::max() ||
        dense[j] < std::numeric_limits<std::int64_t>::min()) {
      entry->small = false;
    } else {
      entry->lower_terms_small.emplace_back(j, dense[j].convert_to<std::int64_t>());
    }
  }
  entry->dense = std::move(dense);
  return entry;
}

// (x^d - 1) multiplied into p, in place.
void multiply_binomial(std::vector<BigInt>& p, std::int64_t d) {
  const std::size_t shift = static_cast<std::size_t>(d);
  p.resize(p.size() + shift);
  for (std::size_t i = p.size(); i-- > 0;) {
    BigInt v = -p[i];
    if (i >= shift) v += p[i - shift];
    p[i] = std::move(v);
  }
}

// p / (x^d - 1); throws if the division is not exact.
void divide_binomial(std::vector<BigInt>& p, std::int64_t d) {
  const std::size_t shift = static_cast<std::size_t>(d);
  if (p.size() <= shift) throw std::logic_error("cyclotomic_polynomial: inexact division");
  const std::size_t qdeg = p.size() - 1 - shift;
  std::vector<BigInt> q(qdeg + 1);
  // p[i] = q[i - d] - q[i]  =>  q[j] = p[j + d] + q[j + d]
  for (std::size_t j = qdeg + 1; j-- > 0;) {
    q[j] = p[j + shift];
    if (j + shift <= qdeg) q[j] += q[j + shift];
  }
  // Check the low coefficients: p[i] = -q[i] for i < d.
  for (std::size_t i = 0; i < shift; ++i) {
    const BigInt expect = i <= qdeg ? BigInt(-q[i]) : BigInt(0);
    if (p[i] != expect) throw std::logic_error("cyclotomic_polynomial: inexact division");
  }
  p = std::move(q);
}

std::vector<BigInt> compute_cyclotomic(std::int64_t level) {
  std::vector<BigInt> p{1};
  const auto divs = divisors(level);
  for (std::int64_t d : divs) {
    if (mobius(level / d) == 1) multiply_binomial(p, d);
  }
  for (std::int64_t d : divs) {
    if (mobius(level / d) == -1) divide_binomial(p, d);
  }
  return p;
}

class CyclotomicCache {
 public:
  std::shared_ptr<const CyclotomicEntry> get(std::int64_t level) {
    {
      std::lock_guard lock(mu_);
      if (auto it = entries_.find(level); it != entries_.end()) return it->second;
    }
    auto entry = make_entry(compute_cyclotomic(level));
    std::lock_guard lock(mu_);
    return entries_.emplace(level, std::move(entry)).first->second;
  }

  void put(std::int64_t level, std::vector<BigInt> coeffs) {
    auto entry = make_entry(std::move(coeffs));
    std::lock_guard lock(mu_);
    entries_[level] = std::move(entry);
  }

  void clear() {
    std::lock_guard lock(mu_);
    entries_.clear();
  }

 private:
  std::mutex mu_;
  std::map<std::int64_t, std::shared_ptr<const CyclotomicEntry>> entries_;
};

CyclotomicCache& cache() {
  static CyclotomicCache instance;
  return instance;
}

void require_level(std::int64_t level) {
  if (level < 1) throw std::invalid_argument("cyclotomic level must be >= 1");
}

bool fits_int64(const BigInt& v) {
  return v <= std::numeric_limits<std::int64_t>::max() &&
         v >= std::numeric_limits<std::int64_t>::min();
}

// Long division by the monic Phi in int64; false on overflow.
bool reduce_small(std::span<const BigInt> coeffs, const CyclotomicEntry& phi,
                  std::vector<std::int64_t>& r) {
  if (!phi.small) return false;
  r.resize(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (!fits_int64(coeffs[i])) return false;
    r[i] = coeffs[i].convert_to<std::int64_t>();
  }
  const std::size_t deg = phi.dense.size() - 1;
  for (std::size_t i = r.size(); i-- > deg;) {
    const std::int64_t c = r[i];
    if (c == 0) continue;
    r[i] = 0;
    const std::size_t base = i - deg;
    for (const auto& [j, p] : phi.lower_terms_small) {
      std::int64_t prod = 0;
      if (__builtin_mul_overflow(c, p, &prod) ||
          __builtin_sub_overflow(r[base + j], prod, &r[base + j])) {
        return false;
      }
    }
  }
  r.resize(std::min(r.size(), deg));
  r.resize(deg, 0);
  return true;
}

std::vector<BigInt> reduce_big(std::span<const BigInt> coeffs, const CyclotomicEntry& phi) {
  std::vector<BigInt> r(coeffs.begin(), coeffs.end());
  const std::size_t deg = phi.dense.size() - 1;
  for (std::size_t i = r.size(); i-- > deg;) {
    if (r[i] == 0) continue;
    const BigInt c = r[i];
    r[i] = 0;
    const std::size_t base = i - deg;
    for (const auto& [j, p] : phi.lower_terms) r[base + j] -= c * p;
  }
  r.resize(deg);
  return r;
}

bool reduces_to_zero(std::span<const BigInt> coeffs, std::int64_t level) {
  const auto phi = cache().get(level);
  std::vector<std::int64_t> small;
  if (reduce_small(coeffs, *phi, small)) {
    for (std::int64_t v : small) {
      if (v != 0) return false;
    }
    return true;
  }
  for (const BigInt& v : reduce_big(coeffs, *phi)) {
    if (v != 0) return false;
  }
  return true;
}

}  // namespace

AngleFraction::AngleFraction(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw std::invalid_argument("AngleFraction: denominator must be positive");
  num = floor_mod(num, den);
  const std::int64_t g = gcd_all({num, den});
  num_ = num / g;
  den_ = den / g;
}

AngleFraction AngleFraction::operator+(const AngleFraction& other) const {
  const std::int64_t den = lcm(den_, other.den_);
  const std::int64_t num = floor_mod(num_ * (den / den_), den) + floor_mod(other.num_ * (den / other.den_), den);
  return {num, den};
}

std::int64_t AngleFraction::index_at(std::int64_t level) const {
  if (level < 1 || level % den_ != 0) {
    throw std::invalid_argument("angle " + to_string() + " does not live at level " +
                                std::to_string(level));
  }
  return num_ * (level / den_);
}

std::string AngleFraction::to_string() const {
  return std::to_string(num_) + "/" + std::to_string(den_);
}

CharValue CharValue::operator*(const CharValue& other) const {
  if (is_zero() || other.is_zero()) return zero();
  return root(*angle_ + *other.angle_);
}

std::string CharValue::to_string() const { return is_zero() ? "0" : angle_->to_string(); }

CycElement::CycElement(std::int64_t level) : level_(level) {
  require_level(level);
  coeffs_.resize(static_cast<std::size_t>(level));
}

CycElement::CycElement(std::int64_t level, std::vector<BigInt> coeffs)
    : level_(level), coeffs_(std::move(coeffs)) {
  require_level(level);
  if (coeffs_.size() != static_cast<std::size_t>(level)) {
    throw std::invalid_argument("CycElement: expected " + std::to_string(level) + " coefficients");
  }
}

CycElement CycElement::embed(const CharValue& value, std::int64_t level) {
  CycElement out(level);
  if (!value.is_zero()) out.coeffs_[static_cast<std::size_t>(value.angle().index_at(level))] = 1;
  return out;
}

CycElement CycElement::embed(const BigInt& value, std::int64_t level) {
  CycElement out(level);
  out.coeffs_[0] = value;
  return out;
}

const BigInt& CycElement::coeff(std::int64_t index) const {
  return coeffs_[static_cast<std::size_t>(floor_mod(index, level_))];
}

void CycElement::add_at(std::int64_t index, const BigInt& c) {
  coeffs_[static_cast<std::size_t>(floor_mod(index, level_))] += c;
}

CycElement CycElement::lift(std::int64_t target) const {
  if (target < 1 || target % level_ != 0) {
    throw std::invalid_argument("lift: level " + std::to_string(level_) + " does not divide " +
                                std::to_string(target));
  }
  CycElement out(target);
  const std::int64_t step = target / level_;
  for (std::int64_t j = 0; j < level_; ++j) {
    out.coeffs_[static_cast<std::size_t>(j * step)] = coeffs_[static_cast<std::size_t>(j)];
  }
  return out;
}

std::vector<std::pair<std::int64_t, BigInt>> CycElement::terms() const {
  std::vector<std::pair<std::int64_t, BigInt>> out;
  for (std::int64_t j = 0; j < level_; ++j) {
    if (coeffs_[static_cast<std::size_t>(j)] != 0) out.emplace_back(j, coeffs_[static_cast<std::size_t>(j)]);
  }
  return out;
}

void CycElement::require_same_level(const CycElement& other, const char* op) const {
  if (level_ != other.level_) {
    throw std::invalid_argument(std::string(op) + ": level mismatch (" + std::to_string(level_) +
                                " vs " + std::to_string(other.level_) + ")");
  }
}

CycElement& CycElement::operator+=(const CycElement& other) {
  require_same_level(other, "add");
  for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] += other.coeffs_[j];
  return *this;
}

CycElement& CycElement::operator-=(const CycElement& other) {
  require_same_level(other, "sub");
  for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] -= other.coeffs_[j];
  return *this;
}

CycElement& CycElement::operator*=(const BigInt& c) {
  for (auto& v : coeffs_) v *= c;
  return *this;
}

CycElement operator*(const CycElement& a, const CycElement& b) {
  a.require_same_level(b, "mul");
  CycElement out(a.level_);
  const auto bt = b.terms();
  for (const auto& [i, x] : a.terms()) {
    for (const auto& [j, y] : bt) out.add_at(i + j, x * y);
  }
  return out;
}

CycElement scale(const CycElement& a, const BigInt& c) { return a * c; }

std::vector<BigInt> cyclotomic_polynomial(std::int64_t level) {
  require_level(level);
  return cache().get(level)->dense;
}

std::vector<BigInt> reduce_mod_cyclotomic(std::span<const BigInt> coeffs, std::int64_t level) {
  require_level(level);
  const auto phi = cache().get(level);
  std::vector<std::int64_t> small;
  if (reduce_small(coeffs, *phi, small)) return {small.begin(), small.end()};
  auto r = reduce_big(coeffs, *phi);
  r.resize(phi->dense.size() - 1);
  return r;
}

bool is_zero(const CycElement& a) {
  // Every exponent in use is a multiple of g, so the element already lives
  // at level L / g; zero-ness does not depend on the level it is viewed at.
  const std::int64_t level = a.level();
  std::int64_t g = level;
  bool any = false;
  const auto coeffs = a.coeffs();
  for (std::int64_t j = 0; j < level; ++j) {
    if (coeffs[static_cast<std::size_t>(j)] != 0) {
      g = gcd_all({g, j});
      any = true;
    }
  }
  if (!any) return true;
  const std::int64_t reduced = level / g;
  if (reduced == level) return reduces_to_zero(coeffs, level);
  std::vector<BigInt> compact(static_cast<std::size_t>(reduced));
  for (std::int64_t j = 0; j < reduced; ++j) compact[static_cast<std::size_t>(j)] = coeffs[static_cast<std::size_t>(j * g)];
  return reduces_to_zero(compact, reduced);
}

bool equals(const CycElement& a, const CycElement& b) { return is_zero(a - b); }

std::complex<double> to_complex(const CycElement& a) {
  double re = 0.0;
  double im = 0.0;
  const std::int64_t level = a.level();
  for (const auto& [j, c] : a.terms()) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(level);
    const double v = c.convert_to<double>();
    re += v * std::cos(theta);
    im += v * std::sin(theta);
  }
  return {re, im};
}

std::pair<CycElement, CycElement> common_level(const CycElement& a, const CycElement& b) {
  const std::int64_t level = lcm(a.level(), b.level());
  return {a.lift(level), b.lift(level)};
}

namespace fault {

void override_cyclotomic_polynomial(std::int64_t level, std::vector<BigInt> coeffs) {
  if (coeffs.empty() || coeffs.back() != 1) {
    throw std::invalid_argument("override_cyclotomic_polynomial: polynomial must be monic");
  }
  cache().put(level, std::move(coeffs));
}

void clear_cyclotomic_cache() { cache().clear(); }

}  // namespace fault

}  // namespace menon
