#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace expanse::cli {

struct Params {
    std::string spec;  // path, or inline JSON starting with '{'
    std::optional<int> n_max;
    std::vector<int> grids;
    std::optional<int> horizon;
    double tail = 0.5;
    bool log2 = false;
    bool unsafe = false;  // lift the size caps
    std::optional<double> gamma1;
    std::vector<std::string> argv;  // echoed into the manifest
};

inline constexpr int kMaxPower = 64;
inline constexpr int kMaxGrid = 4096;
inline constexpr std::size_t kMaxPoints = 100000;

struct CommandResult {
    nlohmann::json doc;
    int exit_code = 0;  // 0 all requested checks pass, 1 otherwise
};

/// command is one of sft, torus, sampled, verify. Throws InvalidInput for bad
/// parameters or a spec of the wrong kind.
CommandResult execute_command(const std::string& command, const Params& params);

}  // namespace expanse::cli
