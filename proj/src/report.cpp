#include "menon/report.hpp"

#include <cstdio>
#include <limits>

namespace menon {
namespace {

nlohmann::json coefficient_json(const BigInt& c) {
  if (c <= std::numeric_limits<std::int64_t>::max() && c >= std::numeric_limits<std::int64_t>::min()) {
    return c.convert_to<std::int64_t>();
  }
  return c.str();
}

nlohmann::json complex_json(std::complex<double> z) { return nlohmann::json::array({z.real(), z.imag()}); }

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back(sep);
    out += parts[i];
  }
  return out;
}

std::string join(const std::vector<std::int64_t>& xs, char sep) {
  std::vector<std::string> parts;
  for (auto x : xs) parts.push_back(std::to_string(x));
  return join(parts, sep);
}

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

nlohmann::json to_json(const CycElement& element) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [j, c] : element.terms()) terms.push_back(nlohmann::json::array({j, coefficient_json(c)}));
  return {{"level", element.level()}, {"terms", std::move(terms)}, {"float", complex_json(to_complex(element))}};
}

nlohmann::json instance_to_json(const IdentityInstance& inst, const std::vector<std::int64_t>& conductors) {
  nlohmann::json chars = nlohmann::json::array();
  for (const auto& chi : inst.chars) chars.push_back(chi.label());
  return {{"n", inst.n},
          {"m", inst.m()},
          {"k", inst.k()},
          {"F", inst.f.name()},
          {"chars", std::move(chars)},
          {"conductors", conductors},
          {"shifts", inst.shifts},
          {"weights", inst.weights}};
}

nlohmann::json to_json(const VerificationReport& report) {
  nlohmann::json j = {
      {"kind", report.kind},
      {"instance", instance_to_json(report.instance, report.conductors)},
      {"mode", to_string(report.mode)},
      {"equal", report.equal},
      {"lhs_method", report.lhs_method},
      {"rhs_method", report.rhs_method},
      {"lhs_float", complex_json(report.lhs_float)},
      {"rhs_float", complex_json(report.rhs_float)},
      {"elapsed_us", report.elapsed.count()},
  };
  j["lhs"] = report.lhs ? to_json(*report.lhs) : nlohmann::json(nullptr);
  j["rhs"] = report.rhs ? to_json(*report.rhs) : nlohmann::json(nullptr);
  return j;
}

std::string dump_line(const nlohmann::json& j) { return j.dump(); }

std::string csv_header() { return "n,m,k,chars,shifts,weights,F,equal,lhs_float_re,lhs_float_im,micros"; }

std::string csv_row(const VerificationReport& report) {
  const auto& inst = report.instance;
  std::vector<std::string> chars;
  for (const auto& chi : inst.chars) chars.push_back(chi.label());
  std::string row;
  row += std::to_string(inst.n) + ",";
  row += std::to_string(inst.m()) + ",";
  row += std::to_string(inst.k()) + ",";
  row += join(chars, ';') + ",";
  row += join(inst.shifts, ';') + ",";
  row += join(inst.weights, ';') + ",";
  row += inst.f.name() + ",";
  row += report.equal ? "true," : "false,";
  row += g17(report.lhs_float.real()) + ",";
  row += g17(report.lhs_float.imag()) + ",";
  row += std::to_string(report.elapsed.count());
  return row;
}

}  // namespace menon
