#include "menon/sweep.hpp"

#include <condition_variable>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

#include "menon/report.hpp"

namespace menon {
namespace {

template <typename T>
std::vector<T> int_list(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  std::vector<T> out;
  if (v.is_number_integer()) {
    out.push_back(v.get<T>());
  } else if (v.is_array()) {
    for (const auto& x : v) {
      if (!x.is_number_integer()) throw std::invalid_argument(std::string("'") + key + "' must hold integers");
      out.push_back(x.get<T>());
    }
  } else {
    throw std::invalid_argument(std::string("'") + key + "' must be an integer or a list of integers");
  }
  return out;
}

// Odometer over all tuples of length `len` drawn from `choices`.
template <typename T, typename Fn>
void for_each_tuple(const std::vector<T>& choices, std::size_t len, Fn&& fn) {
  if (len > 0 && choices.empty()) return;
  std::vector<std::size_t> pos(len, 0);
  std::vector<T> tuple;
  while (true) {
    tuple.clear();
    for (std::size_t p : pos) tuple.push_back(choices[p]);
    fn(tuple);
    std::size_t i = len;
    while (i > 0) {
      --i;
      if (++pos[i] < choices.size()) break;
      pos[i] = 0;
      if (i == 0) return;
    }
    if (len == 0) return;
  }
}

struct Outcome {
  std::string line;
  enum class Status { kPass, kFail, kSkipped } status = Status::kFail;
};

Outcome evaluate(const IdentityInstance& inst, std::size_t index, const VerifyOptions& options,
                 OutputFormat format) {
  Outcome out;
  std::vector<std::int64_t> conductors;
  try {
    for (const auto& chi : inst.chars) conductors.push_back(conductor(chi));
    const VerificationReport report = verify(inst, options);
    out.status = report.equal ? Outcome::Status::kPass : Outcome::Status::kFail;
    if (format == OutputFormat::kCsv) {
      out.line = csv_row(report);
    } else {
      nlohmann::json j = to_json(report);
      j["index"] = index;
      j["status"] = report.equal ? "pass" : "fail";
      j["type"] = "report";
      out.line = dump_line(j);
    }
    return out;
  } catch (const BudgetExceeded& e) {
    out.status = Outcome::Status::kSkipped;
    out.line = dump_line({{"type", "report"},
                          {"index", index},
                          {"status", "skipped"},
                          {"reason", e.what()},
                          {"instance", instance_to_json(inst, conductors)}});
  } catch (const std::exception& e) {
    out.status = Outcome::Status::kFail;
    out.line = dump_line({{"type", "report"},
                          {"index", index},
                          {"status", "error"},
                          {"reason", e.what()},
                          {"instance", instance_to_json(inst, conductors)}});
  }
  if (format == OutputFormat::kCsv) out.line = "# " + out.line;
  return out;
}

}  // namespace

std::vector<DirichletCharacter> CharSelector::select(std::int64_t n) const {
  std::vector<DirichletCharacter> out;
  switch (kind) {
    case Kind::kAll: return enumerate_characters(n);
    case Kind::kPrincipal: return {DirichletCharacter::principal(n)};
    case Kind::kPrimitive:
      for (auto& chi : enumerate_characters(n)) {
        if (is_primitive(chi)) out.push_back(std::move(chi));
      }
      return out;
    case Kind::kIndices: {
      const std::int64_t phi = euler_phi(n);
      for (std::int64_t i : indices) {
        if (i >= 0 && i < phi) out.push_back(DirichletCharacter::from_index(n, i));
      }
      return out;
    }
  }
  return out;
}

FunctionSpec load_function_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open table file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("table file " + path.string() + ": " + e.what());
  }
  std::string label = "table:" + path.filename().string();
  nlohmann::json values = j;
  if (j.is_object()) {
    if (j.contains("name")) label = j.at("name").get<std::string>();
    values = j.at("values");
  }
  if (!values.is_array() || values.empty()) {
    throw std::invalid_argument("table file " + path.string() + " must hold a nonempty list of values");
  }
  bool integral = true;
  for (const auto& v : values) {
    if (v.is_number_integer()) continue;
    if (v.is_string()) continue;  // big integers as decimal strings
    if (!v.is_number()) throw std::invalid_argument("table file " + path.string() + ": non-numeric value");
    integral = false;
  }
  if (integral) {
    std::vector<BigInt> out;
    for (const auto& v : values) {
      out.push_back(v.is_string() ? BigInt(v.get<std::string>()) : BigInt(v.get<std::int64_t>()));
    }
    return FunctionSpec::table(std::move(out), label);
  }
  std::vector<double> out;
  for (const auto& v : values) {
    if (v.is_string()) throw std::invalid_argument("table file " + path.string() + ": mixed string/real values");
    out.push_back(v.get<double>());
  }
  return FunctionSpec::real_table(std::move(out), label);
}

SweepConfig SweepConfig::from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw std::invalid_argument("sweep config must be a JSON object");
  static const std::vector<std::string> known = {"n_range", "m", "k", "chars", "shifts", "weights", "F",
                                                 "budget", "mode", "seed", "samples", "jobs", "out"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::invalid_argument("unknown sweep config key '" + key + "'");
    }
  }
  SweepConfig c;
  try {
    const auto range = int_list<std::int64_t>(j, "n_range");
    if (range.size() != 2) throw std::invalid_argument("'n_range' must be [min, max]");
    c.n_min = range[0];
    c.n_max = range[1];
    if (c.n_min < 1 || c.n_max < c.n_min) {
      throw std::invalid_argument("'n_range' must be a nonempty range of positive integers");
    }
    if (j.contains("m")) c.m_values = int_list<unsigned>(j, "m");
    if (j.contains("k")) c.k_values = int_list<unsigned>(j, "k");
    if (c.m_values.empty() || c.k_values.empty()) throw std::invalid_argument("'m' and 'k' must be nonempty");
    if (j.contains("chars")) {
      const auto& s = j.at("chars");
      if (s.is_string()) {
        const auto name = s.get<std::string>();
        if (name == "all") {
          c.chars.kind = CharSelector::Kind::kAll;
        } else if (name == "principal") {
          c.chars.kind = CharSelector::Kind::kPrincipal;
        } else if (name == "primitive") {
          c.chars.kind = CharSelector::Kind::kPrimitive;
        } else {
          throw std::invalid_argument("'chars' must be all, principal, primitive or a list of indices");
        }
      } else {
        c.chars.kind = CharSelector::Kind::kIndices;
        c.chars.indices = int_list<std::int64_t>(j, "chars");
      }
    }
    if (j.contains("shifts")) c.shifts = int_list<std::int64_t>(j, "shifts");
    if (j.contains("weights")) c.weights = int_list<std::int64_t>(j, "weights");
    if (j.contains("F")) {
      c.functions.clear();
      const auto& fs = j.at("F");
      const auto add = [&](const nlohmann::json& f) {
        const auto name = f.get<std::string>();
        try {
          c.functions.push_back(FunctionSpec::parse(name));
        } catch (const std::invalid_argument&) {
          std::filesystem::path p(name);
          if (p.is_relative()) p = base_dir / p;
          c.functions.push_back(load_function_table(p));
        }
      };
      if (fs.is_array()) {
        for (const auto& f : fs) add(f);
      } else {
        add(fs);
      }
      if (c.functions.empty()) throw std::invalid_argument("'F' must be nonempty");
    }
    if (j.contains("budget")) {
      const auto b = j.at("budget").get<std::int64_t>();
      if (b <= 0) throw std::invalid_argument("'budget' must be positive");
      c.budget = static_cast<std::uint64_t>(b);
    }
    if (j.contains("mode")) c.mode = parse_mode(j.at("mode").get<std::string>());
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("samples")) {
      c.samples = j.at("samples").get<std::uint64_t>();
      if (!c.seed) throw std::invalid_argument("sampled sweeps ('samples') require a 'seed'");
    }
    if (j.contains("jobs")) c.jobs = j.at("jobs").get<unsigned>();
    if (j.contains("out")) {
      const auto o = j.at("out").get<std::string>();
      if (o == "json") {
        c.out = OutputFormat::kJson;
      } else if (o == "csv") {
        c.out = OutputFormat::kCsv;
      } else {
        throw std::invalid_argument("'out' must be json or csv");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("sweep config: ") + e.what());
  }
  bool any_shape = false;
  for (unsigned m : c.m_values) {
    for (unsigned k : c.k_values) any_shape = any_shape || m + k > 0;
  }
  if (!any_shape) throw std::invalid_argument("sweep config: every (m, k) pair has m + k = 0");
  return c;
}

SweepConfig SweepConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config " + path.string() + ": " + e.what());
  }
  return from_json(j, path.parent_path());
}

std::vector<IdentityInstance> expand(const SweepConfig& config) {
  std::vector<IdentityInstance> out;
  if (config.samples) {
    std::mt19937_64 rng(*config.seed);
    const auto pick = [&rng](std::size_t size) { return static_cast<std::size_t>(rng() % size); };
    const auto span = static_cast<std::uint64_t>(config.n_max - config.n_min + 1);
    std::uint64_t attempts = 0;
    while (out.size() < *config.samples) {
      if (++attempts > 1000 * (*config.samples + 1)) {
        throw std::invalid_argument("sampled sweep: could not draw enough valid instances");
      }
      IdentityInstance inst;
      inst.n = config.n_min + static_cast<std::int64_t>(rng() % span);
      const unsigned m = config.m_values[pick(config.m_values.size())];
      const unsigned k = config.k_values[pick(config.k_values.size())];
      if (m + k == 0) continue;
      inst.f = config.functions[pick(config.functions.size())];
      const auto chars = config.chars.select(inst.n);
      if (m > 0 && (chars.empty() || config.shifts.empty())) continue;
      if (k > 0 && config.weights.empty()) continue;
      for (unsigned j = 0; j < m; ++j) {
        inst.chars.push_back(chars[pick(chars.size())]);
        inst.shifts.push_back(config.shifts[pick(config.shifts.size())]);
      }
      for (unsigned l = 0; l < k; ++l) inst.weights.push_back(config.weights[pick(config.weights.size())]);
      out.push_back(std::move(inst));
    }
    return out;
  }
  for (std::int64_t n = config.n_min; n <= config.n_max; ++n) {
    const auto chars = config.chars.select(n);
    for (unsigned m : config.m_values) {
      for (unsigned k : config.k_values) {
        if (m + k == 0) continue;
        for (const auto& f : config.functions) {
          for_each_tuple(chars, m, [&](const std::vector<DirichletCharacter>& cs) {
            for_each_tuple(config.shifts, m, [&](const std::vector<std::int64_t>& ss) {
              for_each_tuple(config.weights, k, [&](const std::vector<std::int64_t>& ws) {
                out.push_back(IdentityInstance{n, f, cs, ss, ws});
              });
            });
          });
        }
      }
    }
  }
  return out;
}

SweepSummary run_sweep(const std::vector<IdentityInstance>& instances, const VerifyOptions& options,
                       std::ostream& out, OutputFormat format, unsigned jobs) {
  const auto start = std::chrono::steady_clock::now();
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(1, instances.size())));

  std::vector<std::optional<Outcome>> results(instances.size());
  std::mutex mu;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};

  const auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < instances.size(); i = next.fetch_add(1)) {
      Outcome o = evaluate(instances[i], i, options, format);
      {
        std::lock_guard lock(mu);
        results[i] = std::move(o);
      }
      ready.notify_all();
    }
  };
  std::vector<std::jthread> threads;
  for (unsigned t = 0; t < jobs; ++t) threads.emplace_back(worker);

  SweepSummary summary;
  summary.total = instances.size();
  if (format == OutputFormat::kCsv) out << csv_header() << '\n';
  for (std::size_t i = 0; i < instances.size(); ++i) {
    Outcome o;
    {
      std::unique_lock lock(mu);
      ready.wait(lock, [&] { return results[i].has_value(); });
      o = std::move(*results[i]);
      results[i].reset();
    }
    out << o.line << '\n';
    switch (o.status) {
      case Outcome::Status::kPass: ++summary.passed; break;
      case Outcome::Status::kFail: ++summary.failed; break;
      case Outcome::Status::kSkipped: ++summary.skipped; break;
    }
  }
  threads.clear();
  summary.elapsed =
      std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start);
  if (format == OutputFormat::kJson) out << dump_line(summary_to_json(summary)) << '\n';
  out.flush();
  return summary;
}

nlohmann::json summary_to_json(const SweepSummary& summary) {
  return {{"type", "summary"},
          {"total", summary.total},
          {"passed", summary.passed},
          {"failed", summary.failed},
          {"skipped", summary.skipped},
          {"elapsed_us", summary.elapsed.count()}};
}

}  // namespace menon
