#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace expanse::cli {

inline constexpr const char* kToolVersion = "expanse 0.3.0";

/// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(const std::string& bytes);

/// Run manifest. The timestamp comes from SOURCE_DATE_EPOCH (UTC, ISO 8601)
/// and is empty when that variable is unset, keeping output reproducible.
nlohmann::json make_manifest(const std::string& spec_bytes, const std::vector<std::string>& argv,
                             nlohmann::json parameters);

}  // namespace expanse::cli
