#include "doctest.h"
#include "visclab/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace visclab;

namespace {

const char* kMinimal = R"({
  "domain": {"type": "interval", "a": 0, "b": 1},
  "operator": {"type": "linear", "coefficients": {"sigma": 1, "b": 0, "c": 1, "f": 0}},
  "boundary": {"type": "neumann", "g": 0}
})";

std::vector<std::string> schema_errors(const std::string& text) {
    try {
        (void)parse_config(text);
    } catch (const SchemaError& e) {
        return e.errors();
    }
    return {};
}

bool mentions(const std::vector<std::string>& errs, const std::string& s) {
    for (const auto& e : errs)
        if (e.find(s) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("minimal document gets defaults") {
    Config c = parse_config(kMinimal);
    CHECK(c.problem.domain.dim() == 1);
    CHECK(c.cells == std::vector<int>{64});
    CHECK(c.seed == 1);
    CHECK(c.output == "out");
    CHECK(c.solver.tol == 1e-10);
    CHECK_FALSE(c.vv_rate.has_value());
    CHECK(c.rate_study().mu_schedule == RateStudy::default_schedule());
    CHECK(c.lemma_study().eps_levels.size() == 4);
}

TEST_CASE("missing boundary names its path") {
    auto errs = schema_errors(R"({
      "domain": {"type": "interval", "a": 0, "b": 1},
      "operator": {"type": "linear", "coefficients": {"sigma": 1, "b": 0, "c": 1, "f": 0}}
    })");
    REQUIRE_FALSE(errs.empty());
    CHECK(mentions(errs, "/boundary"));
}

TEST_CASE("unknown keys and bad values are collected") {
    Json j = Json::parse(kMinimal);
    j["colour"] = "red";
    j["solver"] = {{"cells", {16}}, {"damping", 2.0}};
    auto errs = schema_errors(j.dump());
    CHECK(mentions(errs, "/colour"));
    CHECK(mentions(errs, "/solver/damping"));
}

TEST_CASE("malformed text is a config error") {
    CHECK_THROWS_AS(parse_config("{\"domain\": "), ConfigError);
}

TEST_CASE("r0 beyond the inradius is rejected") {
    Json j = Json::parse(kMinimal);
    j["studies"] = {{"lemma_check", {{"r0", 0.8}}}};
    CHECK(mentions(schema_errors(j.dump()), "/studies/lemma_check/r0"));
}

TEST_CASE("shipped configs round-trip") {
    int seen = 0;
    for (const auto& e : std::filesystem::directory_iterator(VISCLAB_CONFIG_DIR)) {
        if (e.path().extension() != ".json") continue;
        std::ifstream in(e.path());
        std::stringstream ss;
        ss << in.rdbuf();
        Json doc = Json::parse(ss.str());
        CAPTURE(e.path().string());
        CHECK(serialize_config(parse_config(ss.str())) == doc);
        ++seen;
    }
    CHECK(seen >= 5);
}

TEST_CASE("serialize is a fixed point") {
    Json once = serialize_config(parse_config(kMinimal));
    CHECK(serialize_config(parse_config(once.dump())) == once);
}

}
