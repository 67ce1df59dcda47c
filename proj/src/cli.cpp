#include "menon/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <ostream>

#include "menon/report.hpp"
#include "menon/selftest.hpp"
#include "menon/sweep.hpp"

namespace menon {
namespace {

std::int64_t to_int(const std::string& s, const char* what) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument(std::string("invalid ") + what + " '" + s + "'");
  }
  return v;
}

std::vector<std::int64_t> int_list(const std::string& text, const char* what) {
  std::vector<std::int64_t> out;
  for (const auto& item : split_list(text)) out.push_back(to_int(item, what));
  return out;
}

FunctionSpec function_from_argument(const std::string& text) {
  try {
    return FunctionSpec::parse(text);
  } catch (const std::invalid_argument&) {
    if (std::filesystem::exists(text)) return load_function_table(text);
    throw;
  }
}

OutputFormat parse_format(const std::string& text) {
  if (text == "json") return OutputFormat::kJson;
  if (text == "csv") return OutputFormat::kCsv;
  throw std::invalid_argument("--out must be json or csv");
}

struct VerifyArgs {
  std::int64_t n = 0;
  std::string chars;
  std::string shifts;
  std::string weights;
  std::string f = "identity";
  std::string mode = "exact";
  std::int64_t budget = static_cast<std::int64_t>(kDefaultBudget);
  std::string out = "json";
};

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  IdentityInstance inst;
  VerifyOptions options;
  OutputFormat format;
  try {
    if (args.n < 1) throw std::invalid_argument("--n must be >= 1");
    if (args.budget <= 0) throw std::invalid_argument("--budget must be positive");
    inst.n = args.n;
    for (const auto& c : split_list(args.chars)) inst.chars.push_back(parse_character(c));
    inst.shifts = int_list(args.shifts, "shift");
    inst.weights = int_list(args.weights, "weight");
    // A single character with no explicit shift means s = 1.
    if (inst.shifts.empty() && inst.chars.size() == 1) inst.shifts = {1};
    inst.f = function_from_argument(args.f);
    options.mode = parse_mode(args.mode);
    options.budget = static_cast<std::uint64_t>(args.budget);
    format = parse_format(args.out);
    inst.validate();
  } catch (const std::exception& e) {
    err << "menon verify: " << e.what() << '\n';
    return kExitInvalid;
  }

  VerificationReport report;
  try {
    report = verify(inst, options);
  } catch (const BudgetExceeded& e) {
    err << "menon verify: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    err << "menon verify: " << e.what() << '\n';
    return kExitInvalid;
  }
  if (format == OutputFormat::kCsv) {
    out << csv_header() << '\n' << csv_row(report) << '\n';
  } else {
    out << dump_line(to_json(report)) << '\n';
  }
  return report.equal ? kExitEqual : kExitMismatch;
}

struct SweepArgs {
  std::string config;
  std::optional<unsigned> jobs;
  std::optional<std::string> out;
  std::optional<std::string> mode;
  std::optional<std::int64_t> budget;
};

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  SweepConfig config;
  std::vector<IdentityInstance> instances;
  VerifyOptions options;
  OutputFormat format = OutputFormat::kJson;
  unsigned jobs = 0;
  try {
    config = SweepConfig::load(args.config);
    if (args.mode) config.mode = parse_mode(*args.mode);
    if (args.budget) {
      if (*args.budget <= 0) throw std::invalid_argument("--budget must be positive");
      config.budget = static_cast<std::uint64_t>(*args.budget);
    }
    if (config.out) format = *config.out;
    if (args.out) format = parse_format(*args.out);
    if (config.jobs) jobs = *config.jobs;
    if (args.jobs) jobs = *args.jobs;
    options.mode = config.mode;
    options.budget = config.budget;
    instances = expand(config);
  } catch (const std::exception& e) {
    err << "menon sweep: " << e.what() << '\n';
    return kExitInvalid;
  }
  const SweepSummary summary = run_sweep(instances, options, out, format, jobs);
  if (format == OutputFormat::kCsv) err << dump_line(summary_to_json(summary)) << '\n';
  return summary.failed == 0 ? kExitEqual : kExitMismatch;
}

int cmd_table(std::int64_t n, const std::string& out_format, std::ostream& out, std::ostream& err) {
  OutputFormat format;
  std::shared_ptr<const UnitGroup> group;
  try {
    format = parse_format(out_format);
    group = unit_group(n);
  } catch (const std::exception& e) {
    err << "menon table: " << e.what() << '\n';
    return kExitInvalid;
  }
  const auto units = group->units();
  if (format == OutputFormat::kCsv) {
    out << "index,label,exponents,conductor,primitive,order,values\n";
  } else {
    out << dump_line({{"type", "group"},
                      {"modulus", n},
                      {"phi", group->phi()},
                      {"exponent", group->exponent()},
                      {"generators", std::vector<std::int64_t>(group->generators().begin(), group->generators().end())},
                      {"orders", std::vector<std::int64_t>(group->orders().begin(), group->orders().end())},
                      {"units", std::vector<std::int64_t>(units.begin(), units.end())}})
        << '\n';
  }
  for (const auto& chi : enumerate_characters(n)) {
    std::vector<std::string> values;
    for (std::int64_t a : units) values.push_back(chi(a).to_string());
    const std::int64_t d = conductor(chi);
    if (format == OutputFormat::kCsv) {
      std::string exps;
      for (std::size_t i = 0; i < chi.exponents().size(); ++i) {
        exps += (i ? " " : "") + std::to_string(chi.exponents()[i]);
      }
      std::string vals;
      for (std::size_t i = 0; i < values.size(); ++i) vals += (i ? " " : "") + values[i];
      out << chi.index() << ',' << chi.label() << ',' << exps << ',' << d << ',' << (d == n ? "true" : "false")
          << ',' << chi.order() << ',' << vals << '\n';
    } else {
      out << dump_line({{"type", "character"},
                        {"index", chi.index()},
                        {"label", chi.label()},
                        {"exponents", chi.exponents()},
                        {"conductor", d},
                        {"primitive", d == n},
                        {"order", chi.order()},
                        {"values", values}})
          << '\n';
    }
  }
  return kExitEqual;
}

int cmd_selftest(std::ostream& out) {
  std::size_t failed = 0;
  std::size_t total = 0;
  const auto start = std::chrono::steady_clock::now();
  run_selftest([&](const CheckResult& r) {
    ++total;
    if (!r.passed) ++failed;
    out << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.elapsed.count() << " ms)";
    if (!r.passed) out << ": " << r.detail;
    out << '\n' << std::flush;
  });
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  out << (failed == 0 ? "selftest passed: " : "selftest FAILED: ") << (total - failed) << "/" << total
      << " checks in " << ms.count() << " ms\n";
  return failed == 0 ? kExitEqual : kExitMismatch;
}

}  // namespace

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  int depth = 0;
  const auto flush = [&] {
    const auto first = current.find_first_not_of(" \t");
    if (first != std::string::npos) {
      const auto last = current.find_last_not_of(" \t");
      out.push_back(current.substr(first, last - first + 1));
    }
    current.clear();
  };
  for (char c : text) {
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == ',' && depth == 0) {
      flush();
    } else {
      current.push_back(c);
    }
  }
  flush();
  return out;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact verification of Menon-type gcd-sum identities with character twists", "menon"};
  app.require_subcommand(1);

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "Compare brute-force and closed-form sides of one instance");
  verify_cmd->add_option("--n", verify_args.n, "Modulus n")->required();
  verify_cmd->add_option("--chars", verify_args.chars,
                         "Dirichlet characters, comma separated: n:index or n:[e1,e2,...]");
  verify_cmd->add_option("--shifts", verify_args.shifts,
                         "Shifts s_1..s_m, comma separated (write --shifts=-1,2 for negatives)");
  verify_cmd->add_option("--weights", verify_args.weights, "Additive weights w_1..w_k, comma separated");
  verify_cmd->add_option("--F", verify_args.f, "Arithmetic function name or path to a JSON table")
      ->capture_default_str();
  verify_cmd->add_option("--mode", verify_args.mode, "exact, float or both")->capture_default_str();
  verify_cmd->add_option("--budget", verify_args.budget, "Brute-force loop budget")->capture_default_str();
  verify_cmd->add_option("--out", verify_args.out, "json or csv")->capture_default_str();

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a grid or sampled sweep from a JSON config");
  sweep_cmd->add_option("--config", sweep_args.config, "Sweep config (JSON)")->required();
  sweep_cmd->add_option("--jobs", sweep_args.jobs, "Worker threads (default: all processors)");
  sweep_cmd->add_option("--out", sweep_args.out, "json or csv");
  sweep_cmd->add_option("--mode", sweep_args.mode, "exact, float or both (overrides config)");
  sweep_cmd->add_option("--budget", sweep_args.budget, "Brute-force loop budget (overrides config)");

  std::int64_t table_n = 0;
  std::string table_out = "json";
  auto* table_cmd = app.add_subcommand("table", "Print the character table of a modulus");
  table_cmd->add_option("--n", table_n, "Modulus n")->required();
  table_cmd->add_option("--out", table_out, "json or csv")->capture_default_str();

  auto* selftest_cmd = app.add_subcommand("selftest", "Run the invariant suite of every module");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInvalid;
  }

  if (verify_cmd->parsed()) return cmd_verify(verify_args, out, err);
  if (sweep_cmd->parsed()) return cmd_sweep(sweep_args, out, err);
  if (table_cmd->parsed()) return cmd_table(table_n, table_out, out, err);
  if (selftest_cmd->parsed()) return cmd_selftest(out);
  return kExitInvalid;
}

}  // namespace menon
