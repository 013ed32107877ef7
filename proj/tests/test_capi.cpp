#include "doctest.h"
#include "json.hpp"
#include "ttlift/ttlift.h"

#include <cstdlib>
#include <string>

using nlohmann::json;

namespace {

std::string take(char* s) {
    std::string out = s ? s : "";
    ttl_string_free(s);
    return out;
}

struct Ctx {
    ttl_context* p = nullptr;
    ~Ctx() { ttl_context_free(p); }
};

}  // namespace

TEST_CASE("version and model list") {
    CHECK(std::string(ttl_version()) == "0.1.0");
    char* out = nullptr;
    REQUIRE(ttl_models_list(&out) == TTL_OK);
    auto j = json::parse(take(out));
    REQUIRE(j.is_array());
    CHECK(j.size() == 3);
    CHECK(j[0]["name"] == "gravity1d");
}

TEST_CASE("builtin config text") {
    char* out = nullptr;
    REQUIRE(ttl_model_config_builtin("a2", &out) == TTL_OK);
    CHECK(json::parse(take(out))["N"] == 2);
    CHECK(ttl_model_config_builtin("nope", &out) == TTL_ERR_CONFIG);
    CHECK(std::string(ttl_last_error()).find("nope") != std::string::npos);
}

TEST_CASE("NULL arguments") {
    CHECK(ttl_models_list(nullptr) == TTL_ERR_INVALID_ARG);
    CHECK(ttl_context_create(nullptr, nullptr, nullptr) == TTL_ERR_INVALID_ARG);
    CHECK(ttl_verify(nullptr, nullptr, nullptr, nullptr, nullptr) == TTL_ERR_INVALID_ARG);
    CHECK(ttl_lift(nullptr, "u", nullptr) == TTL_ERR_INVALID_ARG);
    ttl_context_free(nullptr);
    ttl_string_free(nullptr);
}

TEST_CASE("context creation with overrides") {
    Ctx c;
    REQUIRE(ttl_context_create("gravity1d", R"({"n_max": 2, "d_max": 4, "seed": 9})", &c.p) == TTL_OK);
    CHECK(std::string(ttl_last_error()).empty());
    char* out = nullptr;
    REQUIRE(ttl_context_config(c.p, &out) == TTL_OK);
    auto j = json::parse(take(out));
    CHECK(j["truncation"]["n_max"] == 2);
    CHECK(j["truncation"]["d_max"] == 4);
    CHECK(j["seed"] == 9);
}

TEST_CASE("raising n_max raises i_max") {
    Ctx c;
    REQUIRE(ttl_context_create("a2", R"({"n_max": 3, "d_max": 4})", &c.p) == TTL_OK);
    char* out = nullptr;
    REQUIRE(ttl_context_config(c.p, &out) == TTL_OK);
    CHECK(json::parse(take(out))["truncation"]["i_max"] == 3);
}

TEST_CASE("error codes") {
    ttl_context* p = nullptr;
    CHECK(ttl_context_create("a2", R"({"frobnicate": 1})", &p) == TTL_ERR_CONFIG);
    CHECK(p == nullptr);
    CHECK(std::string(ttl_last_error()).find("/frobnicate") != std::string::npos);
    CHECK(ttl_context_create("a2", R"({"n_max": 3, "i_max": 2})", &p) == TTL_ERR_CONFIG);
    CHECK(ttl_context_create("a2", "{not json", &p) == TTL_ERR_CONFIG);
    CHECK(ttl_context_create("no_such_model", nullptr, &p) == TTL_ERR_CONFIG);
    std::string bad = std::string(TTLIFT_MODELS_DIR) + "/a3_corrupted.json";
    CHECK(ttl_context_create(bad.c_str(), nullptr, &p) == TTL_ERR_MODEL);
    CHECK(std::string(ttl_last_error()).find("WDVV") != std::string::npos);
}

TEST_CASE("model directory from the environment") {
    ttl_context* p = nullptr;
    ::unsetenv("TTLIFT_MODEL_DIR");
    CHECK(ttl_context_create("a3", nullptr, &p) == TTL_ERR_CONFIG);
    ::setenv("TTLIFT_MODEL_DIR", TTLIFT_MODELS_DIR, 1);
    Ctx c;
    CHECK(ttl_context_create("a3", nullptr, &c.p) == TTL_OK);
    ::unsetenv("TTLIFT_MODEL_DIR");
}

TEST_CASE("verify and lift") {
    Ctx c;
    REQUIRE(ttl_context_create("gravity1d", R"({"n_max": 2, "d_max": 4})", &c.p) == TTL_OK);
    char *report = nullptr, *table = nullptr;
    int ok = -1;
    REQUIRE(ttl_verify(c.p, "lift,frame", &report, &table, &ok) == TTL_OK);
    CHECK(ok == 1);
    auto r = json::parse(take(report));
    CHECK(r["overall"]["status"] == "pass");
    CHECK(take(table).find("lift.u_restriction") != std::string::npos);
    CHECK(ttl_verify(c.p, "bogus", nullptr, nullptr, &ok) == TTL_ERR_INVALID_ARG);

    char* out = nullptr;
    REQUIRE(ttl_lift(c.p, "u", &out) == TTL_OK);
    CHECK(json::parse(take(out))["target"] == "u");
    CHECK(ttl_lift(c.p, "nope", &out) == TTL_ERR_UNKNOWN_TARGET);
}

TEST_CASE("JSON text is accepted as a model") {
    char* text = nullptr;
    REQUIRE(ttl_model_config_builtin("rand2d", &text) == TTL_OK);
    Ctx c;
    CHECK(ttl_context_create(take(text).c_str(), R"({"d_max": 3})", &c.p) == TTL_OK);
}
