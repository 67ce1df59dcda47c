#pragma once

// JSON and CSV renderings of verification reports.
//
// JSON objects use nlohmann::json's sorted key order, so dumping a parsed
// report reproduces the original bytes. CycElements serialize as
//   {"level": L, "terms": [[index, coefficient], ...], "float": [re, im]}
// with coefficients as JSON integers when they fit in 64 bits and as
// decimal strings otherwise.

#include <string>

#include <json.hpp>

#include "menon/engine.hpp"

namespace menon {

nlohmann::json to_json(const CycElement& element);
nlohmann::json instance_to_json(const IdentityInstance& inst, const std::vector<std::int64_t>& conductors);
nlohmann::json to_json(const VerificationReport& report);

/// Compact single-line dump.
std::string dump_line(const nlohmann::json& j);

/// Column names of the CSV sweep output.
std::string csv_header();
std::string csv_row(const VerificationReport& report);

}  // namespace menon
