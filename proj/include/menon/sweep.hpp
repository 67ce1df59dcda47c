#pragma once

// Grid and sampled sweeps over identity instances, streamed as JSON lines
// (or CSV) in instance order regardless of how many worker threads run.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "menon/engine.hpp"

namespace menon {

struct CharSelector {
  enum class Kind { kAll, kPrincipal, kPrimitive, kIndices };
  Kind kind = Kind::kAll;
  std::vector<std::int64_t> indices;  // kIndices only; indices >= phi(n) are skipped

  /// Characters mod n picked by this selector, in enumeration order.
  std::vector<DirichletCharacter> select(std::int64_t n) const;
};

enum class OutputFormat { kJson, kCsv };

struct SweepConfig {
  std::int64_t n_min = 1;
  std::int64_t n_max = 1;
  std::vector<unsigned> m_values{1};
  std::vector<unsigned> k_values{0};
  CharSelector chars;
  std::vector<std::int64_t> shifts{1};
  std::vector<std::int64_t> weights{0};
  std::vector<FunctionSpec> functions{FunctionSpec::identity()};
  std::uint64_t budget = kDefaultBudget;
  Mode mode = Mode::kExact;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> samples;  // sampled sweep when set
  std::optional<unsigned> jobs;
  std::optional<OutputFormat> out;

  /// Throws std::invalid_argument on schema violations. Relative table paths
  /// resolve against base_dir.
  static SweepConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  static SweepConfig load(const std::filesystem::path& path);
};

/// Reads an integer table F from a JSON file: either [v1, v2, ...] or
/// {"name": ..., "values": [...]}; values are F(1), F(2), ...
FunctionSpec load_function_table(const std::filesystem::path& path);

/// Every instance of the grid (or `samples` draws from it, seeded).
std::vector<IdentityInstance> expand(const SweepConfig& config);

struct SweepSummary {
  std::uint64_t total = 0;
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;
  std::uint64_t skipped = 0;
  std::chrono::microseconds elapsed{0};
};

/// Runs every instance, writing one line per instance then a summary line
/// (JSON) or a header plus rows (CSV). jobs = 0 means hardware concurrency.
SweepSummary run_sweep(const std::vector<IdentityInstance>& instances, const VerifyOptions& options,
                       std::ostream& out, OutputFormat format, unsigned jobs);

nlohmann::json summary_to_json(const SweepSummary& summary);

}  // namespace menon
