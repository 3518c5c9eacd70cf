#include <cmath>
#include <sstream>
#include <string>
#include <variant>

#include "cli/commands.hpp"
#include "cli/manifest.hpp"
#include "cli/report.hpp"
#include "cli/spec_io.hpp"
#include "doctest.h"
#include "expanse/error.hpp"

using namespace expanse;
using namespace expanse::cli;

namespace {

std::string render(const nlohmann::json& doc, Format f) {
    std::ostringstream out;
    write_report(doc, f, out);
    return out.str();
}

Params params_for(const std::string& spec, int n_max) {
    Params p;
    p.spec = spec;
    p.n_max = n_max;
    return p;
}

const char* kFullShift = R"({"size":2,"entries":[[1,1],[1,1]],"q":2,"sided":"two"})";
const char* kCat = R"({"dim":2,"matrix":[[2,1],[1,1]]})";

std::vector<double> column(const nlohmann::json& doc, const std::string& seq) {
    std::vector<double> out;
    for (const auto& row : doc.at("sequences").at(seq).at("rows")) out.push_back(row.at("gamma").get<double>());
    return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("parse: symbolic, torus, determinant error") {
    const auto s = parse_system_spec(kFullShift);
    REQUIRE(std::holds_alternative<SymbolicSpec>(s));
    const auto& space = std::get<SymbolicSpec>(s).space;
    CHECK(space.matrix.size() == 2);
    CHECK(space.matrix.is_full_shift());
    CHECK(space.q == 2.0);
    CHECK(space.sided == Sidedness::two_sided);

    const auto t = parse_system_spec(kCat);
    REQUIRE(std::holds_alternative<TorusSpec>(t));
    CHECK(std::get<TorusSpec>(t).map.dim() == 2);

    try {
        parse_system_spec(R"({"dim":2,"matrix":[[2,0],[0,1]]})");
        FAIL("expected an error");
    } catch (const InvalidInput& e) {
        CHECK(e.field() == "matrix");
        CHECK(std::string(e.what()).find("determinant 2") != std::string::npos);
    }
}

TEST_CASE("parse: syntax and schema errors carry context") {
    try {
        parse_system_spec("{\n  \"size\": 2,\n  \"entries\": [[1,1],\n}");
        FAIL("expected an error");
    } catch (const InvalidInput& e) {
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
    try {
        parse_system_spec(R"({"size":2,"entries":[[1,1],[1,2]],"q":2,"sided":"two"})");
        FAIL("expected an error");
    } catch (const InvalidInput& e) {
        CHECK(e.field().find("entries") == 0);
    }
    CHECK_THROWS_AS(parse_system_spec("[1,2]"), InvalidInput);
    CHECK_THROWS_AS(parse_system_spec(R"({"foo":1})"), InvalidInput);
    CHECK_THROWS_AS(parse_system_spec(R"({"checks":{"bogus":{}}})"), InvalidInput);
}

TEST_CASE("sft on the full 2-shift") {
    const auto r = execute_command("sft", params_for(kFullShift, 6));
    CHECK(r.exit_code == 0);
    const auto g = column(r.doc, "gamma");
    const std::vector<double> want{1, 0.5, 0.5, 0.25, 0.25, 0.125};
    CHECK(g == want);
    CHECK(r.doc.at("primary") == "gamma");
}

TEST_CASE("torus on the cat map") {
    auto p = params_for(kCat, 3);
    p.grids = {2};
    const auto r = execute_command("torus", p);
    const auto g = column(r.doc, "upper_grid_q0002");
    REQUIRE(g.size() == 3);
    CHECK(std::abs(g[0] - std::sqrt(0.5)) < 1e-12);
    CHECK(std::abs(g[2] - 0.5) < 1e-12);
}

TEST_CASE("verify exit status") {
    CHECK(execute_command("verify", params_for(kFullShift, 24)).exit_code == 0);

    // gamma shrinking like 4^-n breaks the combined Lipschitz bound log 2 / 2.
    const char* failing = R"({"checks":{"lipschitz-rate":{
        "gamma":{"kind":"exact","values":[1,0.25,0.0625,0.015625,0.00390625,0.0009765625]},
        "lipschitz":2,"inverse_lipschitz":2}}})";
    const auto r = execute_command("verify", params_for(failing, 6));
    CHECK(r.exit_code == 1);
    REQUIRE(r.doc.at("failing").size() == 1);
    CHECK(r.doc.at("failing")[0] == "lipschitz-rate");
}

TEST_CASE("range checks") {
    CHECK_THROWS_AS(execute_command("sft", params_for(kFullShift, 65)), InvalidInput);
    CHECK_THROWS_AS(execute_command("sft", params_for(kFullShift, 0)), InvalidInput);
    auto p = params_for(kCat, 2);
    p.grids = {5000};
    CHECK_THROWS_AS(execute_command("torus", p), InvalidInput);
    CHECK_THROWS_AS(execute_command("torus", params_for(kFullShift, 2)), InvalidInput);
    CHECK_THROWS_AS(execute_command("nope", params_for(kFullShift, 2)), InvalidInput);
}

TEST_CASE("report formats") {
    const auto doc = execute_command("sft", params_for(kFullShift, 4)).doc;

    const auto a = render(doc, Format::json);
    const auto b = render(execute_command("sft", params_for(kFullShift, 4)).doc, Format::json);
    CHECK(a == b);
    CHECK(nlohmann::json::parse(a) == nlohmann::json::parse(b));

    const auto csv = render(doc, Format::csv);
    CHECK(csv.rfind("n,gamma,rate\n", 0) == 0);
    CHECK(csv.find("\n4,0.25,") != std::string::npos);

    const auto text = render(doc, Format::text);
    CHECK(text.find("0.25") != std::string::npos);
    CHECK(text.find("sequence gamma (exact") != std::string::npos);
    CHECK(text.find("hausdorff_dimension    2\n") != std::string::npos);
}

TEST_CASE("real formatting") {
    CHECK(format_real(std::ldexp(1.0, -10)) == "0.0009765625");
    CHECK(format_real(0.5) == "0.5");
    CHECK(format_real(1.0 / 3.0) == "0.333333333333");
    CHECK(real(INFINITY) == "inf");
}

TEST_CASE("manifest digest") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    const auto doc = execute_command("sft", params_for(kFullShift, 2)).doc;
    CHECK(doc.at("manifest").at("spec_sha256") == sha256_hex(kFullShift));
    CHECK(doc.at("manifest").at("tool") == kToolVersion);
}

}  // TEST_SUITE
