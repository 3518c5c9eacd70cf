#include "spec_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "expanse/error.hpp"

namespace expanse::cli {

using nlohmann::json;

namespace {

const json& require(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end()) throw InvalidInput("missing required field", key);
    return *it;
}

long long as_int(const json& v, const std::string& field) {
    if (!v.is_number_integer()) throw InvalidInput("expected an integer", field);
    return v.get<long long>();
}

double as_real(const json& v, const std::string& field) {
    if (!v.is_number()) throw InvalidInput("expected a number", field);
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw InvalidInput("expected a finite number", field);
    return d;
}

std::vector<std::vector<std::int64_t>> int_table(const json& v, const std::string& field) {
    if (!v.is_array()) throw InvalidInput("expected an array of rows", field);
    std::vector<std::vector<std::int64_t>> rows;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto name = field + "[" + std::to_string(i) + "]";
        if (!v[i].is_array()) throw InvalidInput("expected a row array", name);
        std::vector<std::int64_t> row;
        for (std::size_t j = 0; j < v[i].size(); ++j) {
            row.push_back(as_int(v[i][j], name + "[" + std::to_string(j) + "]"));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<PointIndex> index_list(const json& v, const std::string& field, std::size_t bound) {
    if (!v.is_array()) throw InvalidInput("expected an array of point indices", field);
    std::vector<PointIndex> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto x = as_int(v[i], field + "[" + std::to_string(i) + "]");
        if (x < 0 || static_cast<std::size_t>(x) >= bound) {
            throw InvalidInput("point index out of range", field + "[" + std::to_string(i) + "]");
        }
        out.push_back(static_cast<PointIndex>(x));
    }
    return out;
}

SymbolicSpec parse_symbolic(const json& doc) {
    const auto rows = int_table(require(doc, "entries"), "entries");
    std::vector<std::vector<int>> entries;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::vector<int> r;
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            if (rows[i][j] != 0 && rows[i][j] != 1) {
                throw InvalidInput("entries must be 0 or 1",
                                   "entries[" + std::to_string(i) + "][" + std::to_string(j) + "]");
            }
            r.push_back(static_cast<int>(rows[i][j]));
        }
        entries.push_back(std::move(r));
    }
    if (doc.contains("size") && as_int(doc["size"], "size") != static_cast<long long>(entries.size())) {
        throw InvalidInput("does not match the number of rows in entries", "size");
    }
    const auto diag = validate_matrix(entries);
    if (!diag.valid) throw InvalidInput(diag.problems.front(), "entries");
    const double q = doc.contains("q") ? as_real(doc["q"], "q") : 2.0;
    if (!(q > 1.0)) throw InvalidInput("metric parameter must exceed 1", "q");
    Sidedness sided = Sidedness::two_sided;
    if (doc.contains("sided")) {
        const auto& s = doc["sided"];
        if (!s.is_string()) throw InvalidInput("expected \"one\" or \"two\"", "sided");
        const auto v = s.get<std::string>();
        if (v == "one") {
            sided = Sidedness::one_sided;
        } else if (v != "two") {
            throw InvalidInput("expected \"one\" or \"two\"", "sided");
        }
    }
    return {SymbolicSpace(TransitionMatrix(std::move(entries)), q, sided)};
}

TorusSpec parse_torus(const json& doc) {
    const auto rows = int_table(require(doc, "matrix"), "matrix");
    if (doc.contains("dim") && as_int(doc["dim"], "dim") != static_cast<long long>(rows.size())) {
        throw InvalidInput("does not match the number of rows in matrix", "dim");
    }
    std::vector<std::vector<std::int64_t>> m(rows.begin(), rows.end());
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i].size() != m.size()) throw InvalidInput("matrix must be square", "matrix[" + std::to_string(i) + "]");
    }
    const IntMatrix mat(m);
    const auto diag = validate(mat);
    if (!diag.valid()) throw InvalidInput(diag.problems.front(), "matrix");
    TorusSpec spec{ToralAutomorphism(mat), std::nullopt, {}, {}};
    if (doc.contains("n_max")) spec.n_max = static_cast<int>(as_int(doc["n_max"], "n_max"));
    if (doc.contains("Q")) {
        const auto& q = doc["Q"];
        if (q.is_array()) {
            for (std::size_t i = 0; i < q.size(); ++i) {
                spec.grids.push_back(static_cast<int>(as_int(q[i], "Q[" + std::to_string(i) + "]")));
            }
        } else {
            spec.grids.push_back(static_cast<int>(as_int(q, "Q")));
        }
    }
    if (doc.contains("gamma1")) {
        const auto& g = doc["gamma1"];
        if (!g.is_object()) throw InvalidInput("expected an object with \"mode\"", "gamma1");
        const auto& mode = require(g, "mode");
        if (mode == "manual") {
            spec.gamma1.manual = true;
            spec.gamma1.value = as_real(require(g, "value"), "gamma1.value");
            if (!(spec.gamma1.value > 0.0)) throw InvalidInput("must be positive", "gamma1.value");
        } else if (mode != "certified") {
            throw InvalidInput("expected \"certified\" or \"manual\"", "gamma1.mode");
        }
    }
    return spec;
}

SampledSpec parse_sampled(const json& doc) {
    const auto count_raw = as_int(require(doc, "points"), "points");
    if (count_raw < 1) throw InvalidInput("must be positive", "points");
    const auto count = static_cast<std::size_t>(count_raw);
    const auto& dist = require(doc, "dist");
    if (!dist.is_array() || dist.size() != count) throw InvalidInput("expected a points x points matrix", "dist");
    std::vector<double> flat;
    flat.reserve(count * count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto row = "dist[" + std::to_string(i) + "]";
        if (!dist[i].is_array() || dist[i].size() != count) throw InvalidInput("expected a row of length points", row);
        for (std::size_t j = 0; j < count; ++j) flat.push_back(as_real(dist[i][j], row + "[" + std::to_string(j) + "]"));
    }
    auto map = index_list(require(doc, "map"), "map", count);
    if (map.size() != count) throw InvalidInput("expected one image per point", "map");
    std::optional<std::vector<PointIndex>> inverse;
    if (doc.contains("inverse_map") && !doc["inverse_map"].is_null()) {
        inverse = index_list(doc["inverse_map"], "inverse_map", count);
    }
    SampledSpec spec{FiniteSampledSystem(count, std::move(flat), std::move(map), std::move(inverse)), std::nullopt, {}, {}};
    if (doc.contains("cover")) {
        const auto& c = doc["cover"];
        if (!c.is_array()) throw InvalidInput("expected an array of index arrays", "cover");
        std::vector<std::vector<PointIndex>> elems;
        for (std::size_t i = 0; i < c.size(); ++i) elems.push_back(index_list(c[i], "cover[" + std::to_string(i) + "]", count));
        OpenCoverSpec cover(std::move(elems));
        cover.validate_for(spec.system);
        spec.cover = std::move(cover);
    }
    if (doc.contains("scales")) {
        const auto& s = doc["scales"];
        if (!s.is_array()) throw InvalidInput("expected an array of reals", "scales");
        for (std::size_t i = 0; i < s.size(); ++i) spec.scales.push_back(as_real(s[i], "scales[" + std::to_string(i) + "]"));
    }
    if (doc.contains("entropy")) spec.entropy = as_real(doc["entropy"], "entropy");
    return spec;
}

GammaSequence parse_sequence(const json& v, const std::string& field) {
    if (!v.is_object()) throw InvalidInput("expected {\"kind\", \"values\"}", field);
    const auto& kind = require(v, "kind");
    if (!kind.is_string()) throw InvalidInput("expected a string", field + ".kind");
    GammaSequence seq(bound_kind_from_string(kind.get<std::string>()),
                      v.contains("source") && v["source"].is_string() ? v["source"].get<std::string>() : field);
    const auto& values = require(v, "values");
    if (values.is_array()) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            const auto name = field + ".values[" + std::to_string(i) + "]";
            const double x = values[i].is_string() && values[i] == "inf" ? kUnbounded : as_real(values[i], name);
            seq.set(static_cast<int>(i) + 1, x);
        }
    } else if (values.is_object()) {
        for (const auto& [key, val] : values.items()) {
            const auto name = field + ".values." + key;
            int n = 0;
            try {
                std::size_t used = 0;
                n = std::stoi(key, &used);
                if (used != key.size()) throw std::invalid_argument(key);
            } catch (const std::exception&) {
                throw InvalidInput("keys must be positive integers", name);
            }
            const double x = val.is_string() && val == "inf" ? kUnbounded : as_real(val, name);
            seq.set(n, x);
        }
    } else {
        throw InvalidInput("expected an array or an object keyed by n", field + ".values");
    }
    return seq;
}

double scalar(const json& obj, const char* key, const std::string& prefix) {
    return as_real(require(obj, key), prefix + "." + key);
}

BundleSpec parse_bundle(const json& doc) {
    BundleSpec out;
    auto& b = out.bundle;
    if (doc.contains("system") && doc["system"].is_string()) b.system = doc["system"].get<std::string>();
    if (doc.contains("tail")) b.tail_fraction = as_real(doc["tail"], "tail");
    const auto& checks = require(doc, "checks");
    if (!checks.is_object()) throw InvalidInput("expected an object keyed by check name", "checks");
    for (const auto& [name, c] : checks.items()) {
        const auto id = check_id_from_string(name);
        const auto p = "checks." + name;
        if (!c.is_object()) throw InvalidInput("expected an object", p);
        b.requested.push_back(id);
        switch (id) {
            case CheckId::lebesgue:
                b.lebesgue = LebesgueInputs{parse_sequence(require(c, "gamma"), p + ".gamma"),
                                            parse_sequence(require(c, "delta"), p + ".delta"),
                                            scalar(c, "cover_diameter", p), scalar(c, "gamma1", p)};
                break;
            case CheckId::box_dimension:
                b.box_dimension = BoxDimensionInputs{parse_sequence(require(c, "gamma"), p + ".gamma"),
                                                     scalar(c, "dimension", p), scalar(c, "entropy", p)};
                break;
            case CheckId::symbolic_identity:
                b.symbolic_identity = SymbolicIdentityInputs{
                    parse_sequence(require(c, "gamma"), p + ".gamma"), scalar(c, "dimension", p),
                    scalar(c, "entropy", p), c.contains("tolerance") ? scalar(c, "tolerance", p) : 0.02};
                break;
            case CheckId::lipschitz_rate:
                b.lipschitz_rate = LipschitzRateInputs{
                    parse_sequence(require(c, "gamma"), p + ".gamma"), scalar(c, "lipschitz", p),
                    c.contains("inverse_lipschitz") && !c["inverse_lipschitz"].is_null()
                        ? std::optional<double>(scalar(c, "inverse_lipschitz", p))
                        : std::nullopt};
                break;
            case CheckId::torus:
                b.torus = TorusInputs{parse_sequence(require(c, "upper"), p + ".upper"),
                                      parse_sequence(require(c, "lower"), p + ".lower"), scalar(c, "entropy", p),
                                      c.contains("tolerance") ? scalar(c, "tolerance", p) : 0.15};
                break;
            case CheckId::power_scaling:
                b.power_scaling = PowerInputs{parse_sequence(require(c, "base"), p + ".base"),
                                              parse_sequence(require(c, "power"), p + ".power"),
                                              static_cast<int>(as_int(require(c, "n"), p + ".n"))};
                break;
        }
    }
    return out;
}

std::string locate(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

SystemSpec parse_system_spec(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        // byte is one past the offending character
        throw InvalidInput("malformed JSON at " + locate(text, e.byte == 0 ? 0 : e.byte - 1), "spec");
    }
    if (!doc.is_object()) throw InvalidInput("top level must be a JSON object", "spec");
    try {
        if (doc.contains("checks")) return parse_bundle(doc);
        if (doc.contains("entries")) return parse_symbolic(doc);
        if (doc.contains("matrix")) return parse_torus(doc);
        if (doc.contains("points")) return parse_sampled(doc);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("schema violation: ") + e.what(), "spec");
    }
    throw InvalidInput("cannot tell the system kind: expected one of entries, matrix, points, checks", "spec");
}

std::string load_spec_text(const std::string& arg) {
    if (!arg.empty() && arg.front() == '{') return arg;
    std::ifstream in(arg, std::ios::binary);
    if (!in) throw InvalidInput("cannot open '" + arg + "'", "spec");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace expanse::cli
