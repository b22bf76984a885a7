// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "dqlm/config.hpp"
#include "dqlm/error.hpp"
#include "dqlm/io.hpp"
#include "dqlm/runner.hpp"

using namespace dqlm;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("dqlm-test-" + name);
    fs::remove_all(p);
    return p;
}

int run(const json& doc, const fs::path& out_dir, std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int code = run_document(doc, out_dir.string(), out, err);
    if (err_text) *err_text = err.str();
    return code;
}

}  // namespace

TEST_CASE("number formatting round-trips") {
    CHECK(format_double(0.25) == "0.25");
    CHECK(format_double(-0.0) == "0");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    for (double x : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23}) CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("CSV table shape") {
    CsvTable t({"t[1/J]", "sz[hbar]"});
    t.add_row({0.0, 0.5});
    t.add_row({1.0, -0.5});
    CHECK(t.rows() == 2);
    CHECK(t.str() == "t[1/J],sz[hbar]\n0,0.5\n1,-0.5\n");
    CHECK_THROWS_AS(t.add_row({1.0}), DimensionMismatch);
}

TEST_CASE("git blob hashes") {
    CHECK(git_blob_sha1("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
    CHECK(git_blob_sha1("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST_CASE("config schema") {
    const auto cfg = parse_config(json::parse(R"({"task":"steady-state","model":{"L":5,"jumps":[{"type":"biased","gamma_u":2.4,"gamma_d":1.6}]}})"));
    CHECK(cfg.task == Task::SteadyState);
    CHECK(cfg.L == 5);
    CHECK(parse_config(cfg.to_json()).to_json() == cfg.to_json());
    CHECK_THROWS_AS(parse_config(json::parse(R"({"task":"spectrum","colour":1})")), SchemaError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"model":{"L":"five"}})")), SchemaError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"task":"fly"})")), SchemaError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"model":{"jumps":[{"type":"biased","gamma_u":-1,"gamma_d":1}]}})")),
                    SchemaError);
}

TEST_CASE("output directory precedence") {
    auto cfg = parse_config(json::parse(R"({"output_dir":"from-config"})"));
    CHECK(resolve_output_dir(cfg, std::string("from-flag")) == fs::path("from-flag"));
    ::setenv("DQLM_OUTPUT_DIR", "from-env", 1);
    CHECK(resolve_output_dir(cfg, std::nullopt) == fs::path("from-env"));
    ::unsetenv("DQLM_OUTPUT_DIR");
    CHECK(resolve_output_dir(cfg, std::nullopt) == fs::path("from-config"));
}

TEST_CASE("exit codes") {
    CHECK(exit_code_for(SchemaError("x")) == kExitSchema);
    CHECK(exit_code_for(ModelError("x")) == kExitSchema);
    CHECK(exit_code_for(EmptySectorError("x")) == kExitInfeasible);
    CHECK(exit_code_for(SolverError("x")) == kExitSolver);

    std::string err;
    CHECK(run(json::parse(R"({"bogus":true})"), scratch("schema"), &err) == kExitSchema);
    CHECK(json::parse(err).at("exit_code") == kExitSchema);
    // three particles do not fit on two sites
    CHECK(run(json::parse(R"({"task":"steady-state","model":{"L":2},"sector":{"strong":[3]}})"), scratch("empty")) ==
          kExitInfeasible);
}

TEST_CASE("runs are deterministic and write a manifest") {
    const json doc = json::parse(R"({"task":"steady-state","model":{"L":4}})");
    const auto a = scratch("det-a");
    const auto b = scratch("det-b");
    REQUIRE(run(doc, a) == kExitOk);
    REQUIRE(run(doc, b) == kExitOk);
    CHECK(slurp(a / "steady_state_obc.csv") == slurp(b / "steady_state_obc.csv"));
    const auto manifest = json::parse(slurp(a / "manifest.json"));
    CHECK(manifest.at("exit_code") == 0);
    CHECK(manifest.at("task") == "steady-state");
    for (const auto& o : manifest.at("outputs"))
        CHECK(o.at("sha1") == git_blob_sha1(slurp(a / o.at("file").get<std::string>())));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("verify-exact task passes on a short chain") {
    const auto dir = scratch("verify");
    CHECK(run(json::parse(R"({"task":"verify-exact","model":{"L":4}})"), dir) == kExitOk);
    CHECK(fs::exists(dir / "verify.csv"));
    fs::remove_all(dir);
}
