#include "doctest.h"
#include "io/config.hpp"
#include "io/report.hpp"

using namespace ttlift;
using nlohmann::ordered_json;

namespace {

std::string pointer_of(const ordered_json& j) {
    try {
        io::parse_config(j);
    } catch (const io::ConfigError& e) {
        return e.pointer();
    }
    return "";
}

ordered_json a2_json() { return io::to_json(io::builtin_config("a2")); }

}  // namespace

TEST_CASE("builtin configs round trip byte for byte") {
    for (const auto& info : io::builtin_models()) {
        CAPTURE(info.name);
        auto c = io::builtin_config(info.name);
        std::string text = io::serialize(c);
        auto again = io::parse_config(ordered_json::parse(text));
        CHECK(io::serialize(again) == text);
        CHECK(text.back() == '\n');
    }
}

TEST_CASE("file models round trip") {
    auto c = io::load_config(std::string(TTLIFT_MODELS_DIR) + "/a3.json");
    CHECK(c.N == 3);
    auto again = io::parse_config(ordered_json::parse(io::serialize(c)));
    CHECK(io::serialize(again) == io::serialize(c));
}

TEST_CASE("rationals are canonicalized") {
    auto j = a2_json();
    j["prepotential"][1]["re"] = "2/144";
    auto c = io::parse_config(j);
    CHECK(c.prepotential[1].re == "1/72");
    j["euler"]["Q"][1][1] = "4/6";
    CHECK(io::parse_config(j).euler_Q[1][1] == "2/3");
    j["euler"]["Q"][1][1] = "2/0";
    CHECK(pointer_of(j) == "/euler/Q/1/1");
}

TEST_CASE("schema errors carry a JSON pointer") {
    SUBCASE("unknown top-level key") {
        auto j = a2_json();
        j["colour"] = "red";
        CHECK(pointer_of(j) == "/colour");
    }
    SUBCASE("unknown nested key") {
        auto j = a2_json();
        j["truncation"]["k_max"] = 1;
        CHECK(pointer_of(j) == "/truncation/k_max");
    }
    SUBCASE("missing key") {
        auto j = a2_json();
        j.erase("eta");
        CHECK(pointer_of(j) == "/eta");
    }
    SUBCASE("flavor out of range") {
        auto j = a2_json();
        j["prepotential"][0]["mono"][0][2] = 3;
        CHECK(pointer_of(j) == "/prepotential/0/mono/0/2");
    }
    SUBCASE("descendant variable in model data") {
        auto j = a2_json();
        j["prepotential"][0]["mono"][0][1] = 1;
        CHECK(pointer_of(j) == "/prepotential/0/mono/0/1");
    }
    SUBCASE("bad scalar mode") {
        auto j = a2_json();
        j["scalar_mode"] = "decimal";
        CHECK(pointer_of(j) == "/scalar_mode");
    }
}

TEST_CASE("non-symmetric eta is rejected") {
    CHECK_THROWS_AS(io::load_config(std::string(TTLIFT_MODELS_DIR) + "/bad_eta.json"), io::ConfigError);
}

TEST_CASE("truncation bounds") {
    CHECK_NOTHROW(io::check_truncation({2, 5, 2}));
    CHECK_THROWS_AS(io::check_truncation({3, 5, 2}), io::ConfigError);
    CHECK_THROWS_AS(io::check_truncation({5, 5, 5}), io::ConfigError);
    CHECK_THROWS_AS(io::check_truncation({2, 0, 2}), io::ConfigError);
    auto j = a2_json();
    j["truncation"]["i_max"] = 1;
    CHECK(pointer_of(j) == "/truncation/i_max");
}

TEST_CASE("rand2d is a function of its seed") {
    CHECK(io::serialize(io::rand2d_config(7)) == io::serialize(io::rand2d_config(7)));
    CHECK(io::serialize(io::rand2d_config(7)) != io::serialize(io::rand2d_config(8)));
    CHECK(io::serialize(io::builtin_config("rand2d")) == io::serialize(io::rand2d_config(2024)));
}

TEST_CASE("model resolution") {
    CHECK(io::resolve_model("gravity1d", "").name == "gravity1d");
    CHECK(io::resolve_model("a3", TTLIFT_MODELS_DIR).name == "a3");
    CHECK(io::resolve_model(std::string(TTLIFT_MODELS_DIR) + "/a3.json", "").N == 3);
    CHECK_THROWS_AS(io::resolve_model("a3", ""), io::ConfigError);
    CHECK_THROWS_AS(io::resolve_model("nope", TTLIFT_MODELS_DIR), io::ConfigError);
}

TEST_CASE("series rendering") {
    auto r = make_ring(2, 1, 4, ScalarMode::rational);
    Series s = Series::variable(r, VarId{Sector::hol, 0, 1}) * Series::variable(r, VarId{Sector::antihol, 1, 0});
    auto j = io::series_json(s.scaled(r->rational(mpq_class(-1, 2))));
    CHECK(j["valid_degree"] == 4);
    CHECK(j["terms"].size() == 1);
    CHECK(j["text"].get<std::string>().find("1/2") != std::string::npos);
}

TEST_CASE("lift dump targets") {
    auto c = io::builtin_config("gravity1d");
    c.truncation = {2, 4, 2};
    big::BigContext ctx(io::to_model(c), c.truncation);
    for (const auto& t : io::lift_targets()) {
        CAPTURE(t);
        auto j = io::lift_dump(ctx, c, t);
        CHECK(j["target"] == t);
    }
    CHECK_THROWS_AS(io::lift_dump(ctx, c, "bogus"), std::out_of_range);
}
