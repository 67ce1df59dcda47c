#include "menon/arith.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace menon {
namespace {

void require_positive(std::int64_t n, const char* what) {
  if (n < 1) {
    throw std::invalid_argument(std::string(what) + ": argument must be >= 1, got " +
                                std::to_string(n));
  }
}

std::uint64_t magnitude(std::int64_t x) {
  return x < 0 ? std::uint64_t{0} - static_cast<std::uint64_t>(x) : static_cast<std::uint64_t>(x);
}

}  // namespace

Factorization factorize(std::int64_t n) {
  require_positive(n, "factorize");
  if (n > kFactorizeCap) {
    throw std::invalid_argument("factorize: argument exceeds cap " + std::to_string(kFactorizeCap));
  }
  Factorization out;
  out.n = n;
  std::int64_t m = n;
  for (std::int64_t p = 2; p * p <= m; p += (p == 2 ? 1 : 2)) {
    if (m % p != 0) continue;
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    out.factors.push_back({p, e});
  }
  if (m > 1) out.factors.push_back({m, 1});
  return out;
}

std::int64_t gcd_all(std::span<const std::int64_t> xs) {
  std::uint64_t g = 0;
  for (std::int64_t x : xs) g = std::gcd(g, magnitude(x));
  if (g > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    throw std::overflow_error("gcd_all: result 2^63 is not representable");
  }
  return static_cast<std::int64_t>(g);
}

std::int64_t gcd_all(std::initializer_list<std::int64_t> xs) {
  return gcd_all(std::span<const std::int64_t>(xs.begin(), xs.size()));
}

std::int64_t lcm(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  const std::int64_t g = gcd_all({a, b});
  std::int64_t out = 0;
  if (__builtin_mul_overflow(static_cast<std::int64_t>(magnitude(a)) / g,
                             static_cast<std::int64_t>(magnitude(b)), &out)) {
    throw std::overflow_error("lcm: overflow");
  }
  return out;
}

std::int64_t euler_phi(std::int64_t n) {
  require_positive(n, "euler_phi");
  std::int64_t out = n;
  for (const auto& [p, e] : factorize(n).factors) out = out / p * (p - 1);
  return out;
}

int mobius(std::int64_t n) {
  require_positive(n, "mobius");
  const auto f = factorize(n);
  for (const auto& pe : f.factors) {
    if (pe.exponent > 1) return 0;
  }
  return f.factors.size() % 2 == 0 ? 1 : -1;
}

std::int64_t tau(std::int64_t n) {
  require_positive(n, "tau");
  std::int64_t out = 1;
  for (const auto& pe : factorize(n).factors) out *= pe.exponent + 1;
  return out;
}

BigInt sigma_k(std::int64_t n, unsigned k) {
  require_positive(n, "sigma_k");
  BigInt out = 1;
  for (const auto& [p, e] : factorize(n).factors) {
    // 1 + p^k + p^2k + ... + p^ek
    const BigInt pk = boost::multiprecision::pow(BigInt(p), k);
    BigInt term = 1;
    BigInt sum = 1;
    for (int i = 0; i < e; ++i) {
      term *= pk;
      sum += term;
    }
    out *= sum;
  }
  return out;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  require_positive(n, "divisors");
  std::vector<std::int64_t> out{1};
  for (const auto& [p, e] : factorize(n).factors) {
    const std::size_t base = out.size();
    std::int64_t pp = 1;
    for (int i = 1; i <= e; ++i) {
      pp *= p;
      for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * pp);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t checked_pow(std::int64_t base, unsigned exp) {
  std::int64_t out = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (__builtin_mul_overflow(out, base, &out)) throw std::overflow_error("checked_pow: overflow");
  }
  return out;
}

FunctionSpec FunctionSpec::identity() { return {Kind::kIdentity, 0}; }
FunctionSpec FunctionSpec::one() { return {Kind::kOne, 0}; }
FunctionSpec FunctionSpec::power(unsigned j) { return {Kind::kPower, j}; }
FunctionSpec FunctionSpec::tau() { return {Kind::kTau, 0}; }
FunctionSpec FunctionSpec::sigma(unsigned j) { return {Kind::kSigma, j}; }
FunctionSpec FunctionSpec::phi() { return {Kind::kPhi, 0}; }
FunctionSpec FunctionSpec::mobius() { return {Kind::kMobius, 0}; }

FunctionSpec FunctionSpec::table(std::vector<BigInt> values, std::string label) {
  FunctionSpec f(Kind::kTable, 0);
  f.values_ = std::move(values);
  f.label_ = std::move(label);
  return f;
}

FunctionSpec FunctionSpec::real_table(std::vector<double> values, std::string label) {
  FunctionSpec f(Kind::kTable, 0);
  f.real_values_ = std::move(values);
  f.label_ = std::move(label);
  return f;
}

FunctionSpec FunctionSpec::parse(std::string_view name) {
  std::string s;
  for (char c : name) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (s == "identity" || s == "id") return identity();
  if (s == "one") return one();
  if (s == "tau") return tau();
  if (s == "phi") return phi();
  if (s == "mobius" || s == "mu") return mobius();

  // power(j) / sigma(j)
  const auto open = s.find('(');
  if (open != std::string::npos && s.back() == ')') {
    const std::string head = s.substr(0, open);
    const std::string arg = s.substr(open + 1, s.size() - open - 2);
    unsigned j = 0;
    const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), j);
    if (ec == std::errc() && ptr == arg.data() + arg.size() && !arg.empty()) {
      if (head == "power" || head == "pow") return power(j);
      if (head == "sigma") return sigma(j);
    }
  }
  throw std::invalid_argument("unknown arithmetic function '" + std::string(name) + "'");
}

std::int64_t FunctionSpec::table_size() const {
  if (kind_ != Kind::kTable) return 0;
  return static_cast<std::int64_t>(real_values_.empty() ? values_.size() : real_values_.size());
}

std::string FunctionSpec::name() const {
  switch (kind_) {
    case Kind::kIdentity: return "identity";
    case Kind::kOne: return "one";
    case Kind::kPower: return "power(" + std::to_string(param_) + ")";
    case Kind::kTau: return "tau";
    case Kind::kSigma: return "sigma(" + std::to_string(param_) + ")";
    case Kind::kPhi: return "phi";
    case Kind::kMobius: return "mobius";
    case Kind::kTable: return label_;
  }
  return "?";
}

void FunctionSpec::check_argument(std::int64_t n) const {
  if (n < 1) {
    throw std::invalid_argument(name() + ": arithmetic functions are only defined for n >= 1, got " +
                                std::to_string(n));
  }
  if (kind_ == Kind::kTable && n > table_size()) {
    throw std::invalid_argument(name() + ": table has no value for argument " + std::to_string(n) +
                                " (defined for 1.." + std::to_string(table_size()) + ")");
  }
}

BigInt FunctionSpec::operator()(std::int64_t n) const {
  check_argument(n);
  switch (kind_) {
    case Kind::kIdentity: return n;
    case Kind::kOne: return 1;
    case Kind::kPower: return boost::multiprecision::pow(BigInt(n), param_);
    case Kind::kTau: return menon::tau(n);
    case Kind::kSigma: return sigma_k(n, param_);
    case Kind::kPhi: return euler_phi(n);
    case Kind::kMobius: return menon::mobius(n);
    case Kind::kTable:
      if (!real_values_.empty()) {
        throw std::invalid_argument(name() + ": real-valued table cannot be used in exact mode");
      }
      return values_[static_cast<std::size_t>(n - 1)];
  }
  return 0;
}

double FunctionSpec::evaluate_real(std::int64_t n) const {
  if (kind_ == Kind::kTable && !real_values_.empty()) {
    check_argument(n);
    return real_values_[static_cast<std::size_t>(n - 1)];
  }
  return (*this)(n).convert_to<double>();
}

BigInt mu_star(const FunctionSpec& f, std::int64_t n) {
  BigInt out = 0;
  for (std::int64_t d : divisors(n)) {
    const int mu = mobius(d);
    if (mu == 0) continue;
    if (mu > 0) {
      out += f(n / d);
    } else {
      out -= f(n / d);
    }
  }
  return out;
}

}  // namespace menon
