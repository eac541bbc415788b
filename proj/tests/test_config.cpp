#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "orthozeros/config.hpp"
#include "orthozeros/errors.hpp"

using namespace oz;

namespace {

std::string message_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("valid configs") {
    RunConfig c = parse_config(R"({"schema_version": 1, "endpoints": [-1, -0.5, 0.5, 1],
        "R_roots": [-1, 1], "weight": {"kind": "smooth", "form": "exp_polynomial", "coefficients": [0, 0.1]},
        "n_max": 80, "epsilon": 0.05})");
    CHECK(c.system().l() == 2);
    CHECK(c.n_min == 20);
    CHECK(c.n_max == 80);
    CHECK(c.epsilon == 0.05);
    WeightSpec w = c.weight_spec();
    CHECK(w.deg_R() == 2);

    RunConfig b = parse_config(R"({"schema_version": 1, "endpoints": [-1, -0.7, -0.1, 1],
        "weight": {"kind": "bernstein_szego", "roots": [{"re": 0.2, "im": 0.5}]},
        "periodicity": {"N": 3, "k": [1]}, "targets": [[-0.4]]})");
    CHECK(b.weight_spec().is_bernstein_szego());
    CHECK(b.periodicity->N == 3);
}

TEST_CASE("diagnostics name the field") {
    CHECK(message_of(R"({"schema_version": 1, "endpoints": [-1, 0.5, 0.2, 1], "weight": {"kind": "smooth", "coefficients": [1]}})")
              .find("'endpoints'") != std::string::npos);
    CHECK(message_of(R"({"schema_version": 2, "endpoints": [-1, 1], "weight": {}})").find("'schema_version'") !=
          std::string::npos);
    CHECK(message_of(R"({"schema_version": 1, "endpoints": [-1, 1], "weight": {"kind": "spline"}})")
              .find("'weight.kind'") != std::string::npos);
    CHECK(message_of(R"({"schema_version": 1, "endpoints": [-1, 1], "R_roots": [0],
        "weight": {"kind": "bernstein_szego", "roots": []}})")
              .find("'R_roots[0]'") != std::string::npos);
    CHECK(message_of(R"({"schema_version": 1, "endpoints": [-1, 1],
        "weight": {"kind": "bernstein_szego", "roots": [{"re": 0.0}]}})")
              .find("'weight'") != std::string::npos);
    CHECK(message_of(R"({"schema_version": 1, "endpoints": [-1, 1], "n_min": 5, "n_max": 2,
        "weight": {"kind": "bernstein_szego", "roots": []}})")
              .find("'n_max'") != std::string::npos);
}

TEST_CASE("syntax errors report the line") {
    std::string m = message_of("{\n \"schema_version\": 1,\n \"endpoints\": [1, 2\n}");
    CHECK(m.rfind("line 4", 0) == 0);
}

TEST_CASE("JSON output uses 17 significant digits and is stable") {
    nlohmann::json j;
    j["b"] = 0.1;
    j["a"] = {1, 2.5};
    std::string s = dump_json(j);
    CHECK(s == "{\n  \"a\": [\n    1,\n    2.5\n  ],\n  \"b\": 0.10000000000000001\n}\n");
    CHECK(dump_json(j) == s);
}
