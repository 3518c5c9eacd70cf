#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "expanse/sampled.hpp"
#include "expanse/symbolic.hpp"
#include "expanse/torus.hpp"
#include "expanse/verify.hpp"

namespace expanse::cli {

struct SymbolicSpec {
    SymbolicSpace space;
};

struct Gamma1Setting {
    bool manual = false;
    double value = 0.0;  // used when manual
};

struct TorusSpec {
    ToralAutomorphism map;
    std::optional<int> n_max;
    std::vector<int> grids;  // empty: caller default
    Gamma1Setting gamma1;
};

struct SampledSpec {
    FiniteSampledSystem system;
    std::optional<OpenCoverSpec> cover;
    std::vector<double> scales;
    std::optional<double> entropy;  // known entropy of the sampled map, if any
};

/// Explicit sequences and scalars for `verify`, bypassing the compute modules.
struct BundleSpec {
    VerifyBundle bundle;
};

using SystemSpec = std::variant<SymbolicSpec, TorusSpec, SampledSpec, BundleSpec>;

/// Parses a JSON document. The kind is recognised by its keys: "entries"
/// (symbolic), "matrix" (torus), "points" (sampled), "checks" (bundle).
/// Throws InvalidInput naming the field, or the line and column of a syntax error.
SystemSpec parse_system_spec(const std::string& text);

/// Reads a file, or returns `arg` itself when it starts with '{'.
std::string load_spec_text(const std::string& arg);

}  // namespace expanse::cli
