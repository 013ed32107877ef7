#include "doctest.h"
#include "io/config.hpp"
#include "io/report.hpp"
#include "verify/suite.hpp"

#include <set>

using namespace ttlift;
using verify::Status;

namespace {

big::BigContext context(const io::ModelConfig& c) { return big::BigContext(io::to_model(c), c.truncation); }

io::ModelConfig small_config(const std::string& name) {
    auto c = io::builtin_config(name);
    c.truncation = {2, 4, 2};
    return c;
}

}  // namespace

TEST_CASE("group names") {
    CHECK(verify::parse_groups("all").empty());
    CHECK(verify::parse_groups("lift,frame") == std::vector<std::string>{"lift", "frame"});
    CHECK_THROWS_AS(verify::parse_groups("lift,bogus"), std::invalid_argument);
}

TEST_CASE("gravity1d passes every asserted check") {
    auto c = small_config("gravity1d");
    auto ctx = context(c);
    verify::Options opt;
    opt.seed = 3;
    auto entries = verify::run_checks(ctx, opt);
    CHECK(verify::all_pass(entries));
    std::set<std::string> groups, ids;
    for (const auto& e : entries) {
        CAPTURE(e.id);
        groups.insert(e.group);
        CHECK(ids.insert(e.id).second);
        if (e.asserted && e.status != Status::skipped) CHECK(e.status == Status::pass);
        if (e.status == Status::pass && e.asserted) CHECK(e.max_residual <= opt.tolerance);
    }
    CHECK(groups.size() == verify::check_groups().size());
}

TEST_CASE("a single group runs only that group") {
    auto c = small_config("a2");
    auto ctx = context(c);
    verify::Options opt;
    opt.groups = {"lift"};
    auto entries = verify::run_checks(ctx, opt);
    REQUIRE_FALSE(entries.empty());
    for (const auto& e : entries) CHECK(e.group == "lift");
    CHECK(verify::all_pass(entries));
}

TEST_CASE("runs are deterministic for a fixed seed and independent of threading") {
    auto c = small_config("rand2d");
    auto ctx = context(c);
    verify::Options opt;
    opt.seed = 11;
    opt.groups = {"lift", "frame", "aux"};
    auto a = verify::entries_json(verify::run_checks(ctx, opt)).dump();
    opt.parallel = false;
    auto b = verify::entries_json(verify::run_checks(ctx, opt)).dump();
    CHECK(a == b);
}

TEST_CASE("metric groups are skipped without a real structure") {
    auto c = io::load_config(std::string(TTLIFT_MODELS_DIR) + "/a3.json");
    auto ctx = context(c);
    verify::Options opt;
    opt.groups = {"metric", "ttstar_hat"};
    auto entries = verify::run_checks(ctx, opt);
    REQUIRE_FALSE(entries.empty());
    for (const auto& e : entries) {
        CAPTURE(e.id);
        // eta_hat needs no metric
        if (e.id != "metric.eta_hat_blocks") CHECK(e.status == Status::skipped);
    }
    CHECK(verify::all_pass(entries));
}

TEST_CASE("a failing asserted entry fails the run") {
    verify::Entry ok, bad;
    ok.status = Status::pass;
    bad.status = Status::fail;
    CHECK(verify::all_pass({ok}));
    CHECK_FALSE(verify::all_pass({ok, bad}));
    bad.asserted = false;
    CHECK(verify::all_pass({ok, bad}));
}

TEST_CASE("float mode agrees with rational mode") {
    auto c = small_config("a2");
    c.scalar_mode = ScalarMode::floating;
    auto ctx = context(c);
    verify::Options opt;
    opt.groups = {"lift", "frame"};
    opt.tolerance = 1e-8;
    auto entries = verify::run_checks(ctx, opt);
    CHECK(verify::all_pass(entries));
}

TEST_CASE("report layout") {
    auto c = small_config("gravity1d");
    auto ctx = context(c);
    verify::Options opt;
    opt.groups = {"model"};
    auto entries = verify::run_checks(ctx, opt);
    auto r = io::build_report(c, opt.groups, entries);
    CHECK(r["schema"] == io::kReportSchema);
    CHECK(r["overall"]["status"] == "pass");
    CHECK(r["entries"].size() == entries.size());
    CHECK(verify::table(entries).find("model.wdvv") != std::string::npos);
}
