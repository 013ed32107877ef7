#include "doctest.h"
#include "big/context.hpp"
#include "io/config.hpp"
#include "oracles.hpp"

using namespace ttlift;
using big::BigContext;
using big::Frame;
using big::Truncation;

namespace {

BigContext context(const std::string& name, Truncation t, big::Normalization norm = big::Normalization::liu) {
    auto c = io::builtin_config(name);
    c.truncation = t;
    return BigContext(io::to_model(c), t, norm);
}

Series var(const RingPtr& r, int level, int flavor) {
    return Series::variable(r, VarId{Sector::hol, level, flavor});
}

// u = s_0 + sum_{k>=1} s_k u^k
oracle::Poly gravity_u_rescaled(int n_max, int dmax) {
    const int nv = n_max + 1;
    oracle::Poly u = oracle::var(nv, 0);
    for (int iter = 0; iter < 4 * dmax + 4; ++iter) {
        oracle::Poly next = oracle::var(nv, 0), power = u;
        for (int k = 1; k <= n_max; ++k) {
            oracle::add_to(next, oracle::mul(oracle::var(nv, k), power, dmax));
            power = oracle::mul(power, u, dmax);
        }
        if (next == u) break;
        u = next;
    }
    return u;
}

}  // namespace

TEST_CASE("gravity1d u matches the oracle") {
    auto ctx = context("gravity1d", {3, 6, 3});
    const auto& u = ctx.u()[0];
    REQUIRE(u.valid_degree() >= 6);
    auto expect = oracle::truncate(oracle::gravity_u(3, 6), 6);
    CHECK(oracle::truncate(oracle::from_series(u), 6) == expect);
    // a couple of hand values: t1 t0 and t1^2 t0
    oracle::Poly got = oracle::from_series(u);
    CHECK(got[{1, 1, 0, 0}] == 1);
    CHECK(got[{1, 2, 0, 0}] == 1);
    CHECK(got[{2, 0, 1, 0}] == mpq_class(1, 2));
    CHECK(ctx.fixed_point_iterations() <= ctx.d_max() + 2);
}

TEST_CASE("gravity1d u in rescaled coordinates") {
    auto ctx = context("gravity1d", {3, 6, 3}, big::Normalization::dw_rescaled);
    auto s = ctx.dw_rescaled(ctx.u());
    auto expect = oracle::truncate(gravity_u_rescaled(3, 6), s[0].valid_degree());
    CHECK(oracle::from_series(s[0]) == expect);
}

TEST_CASE("M is the t0 derivative of u") {
    for (const char* name : {"gravity1d", "a2", "rand2d"}) {
        CAPTURE(name);
        auto ctx = context(name, {2, 5, 2});
        for (int s = 0; s < ctx.N(); ++s)
            for (int a = 0; a < ctx.N(); ++a) {
                Series d = ctx.u()[s].derivative(VarId{Sector::hol, 0, a});
                int v = std::min(d.valid_degree(), ctx.M()(s, a).valid_degree());
                CHECK((d - ctx.M()(s, a)).truncated(v).is_zero());
            }
    }
}

TEST_CASE("restriction to the small phase space") {
    auto ctx = context("a2", {2, 5, 2});
    const auto& r = ctx.ring();
    for (int a = 0; a < 2; ++a) {
        CHECK((ctx.u()[a].restrict_small() - var(r, 0, a)).is_zero());
        for (int b = 0; b < 2; ++b)
            CHECK((ctx.M()(a, b).restrict_small() - Series::integer(r, a == b)).is_zero());
    }
}

TEST_CASE("lift is a ring map") {
    auto ctx = context("a2", {2, 5, 2});
    const auto& sr = ctx.small_ring();
    Series f = Series::variable(sr, small::t0(0)) + Series::variable(sr, small::t0(1)).pow(2);
    Series g = Series::integer(sr, 3) - Series::variable(sr, small::t0(1));
    Series lhs = ctx.lift(f * g), rhs = ctx.lift(f) * ctx.lift(g);
    int v = std::min(lhs.valid_degree(), rhs.valid_degree());
    CHECK((lhs - rhs).truncated(v).is_zero());
    Series sum = ctx.lift(f + g) - ctx.lift(f) - ctx.lift(g);
    CHECK(sum.truncated(v).is_zero());
}

TEST_CASE("T of a primary direction in gravity1d") {
    auto ctx = context("gravity1d", {3, 6, 3});
    auto t = ctx.T(ctx.basis(Frame::coord, 0, 0));
    CHECK(t.frame == Frame::coord);
    CHECK((t.c[ctx.idx(1, 0)] - Series::integer(ctx.ring(), 1)).is_zero());
    CHECK((t.c[ctx.idx(0, 0)] + ctx.u()[0]).truncated(t.c[0].valid_degree()).is_zero());
    CHECK(t.c[ctx.idx(2, 0)].is_zero());
    CHECK(t.c[ctx.idx(3, 0)].is_zero());
    auto td = ctx.T_definitional(ctx.basis(Frame::coord, 0, 0));
    auto diff = t - td;
    for (const auto& c : diff.c) CHECK(c.truncated(std::min(c.valid_degree(), 4)).is_zero());
}

TEST_CASE("frame change round trip") {
    auto ctx = context("a2", {2, 4, 2});
    auto v = ctx.basis(Frame::coord, 1, 1) + ctx.basis(Frame::coord, 0, 0).scaled(var(ctx.ring(), 1, 0));
    auto back = ctx.to_coord(ctx.to_tframe(v));
    auto d = back - v;
    for (const auto& c : d.c) CHECK(c.truncated(std::min(c.valid_degree(), 3)).is_zero());
}

TEST_CASE("primary three-point functions") {
    auto ctx = context("gravity1d", {3, 6, 3});
    Series g = ctx.three_point(0, 0, 0, 0, 0, 0);
    CHECK((g - ctx.M()(0, 0)).truncated(g.valid_degree()).is_zero());
    // route agreement on a descendant slot
    Series trr = ctx.three_point(1, 0, 0, 0, 0, 0);
    Series der = ctx.three_point_derivative(1, 0, 0, 0, 0);
    int v = std::min(trr.valid_degree(), der.valid_degree());
    CHECK(v >= 2);
    CHECK((trr - der).truncated(v).is_zero());
}

TEST_CASE("three-point functions are symmetric") {
    auto ctx = context("a2", {2, 4, 2});
    Series a = ctx.three_point(1, 0, 0, 1, 1, 1);
    Series b = ctx.three_point(1, 1, 1, 0, 0, 1);
    CHECK((a - b).is_zero());
}

TEST_CASE("the string field is the unit on primaries") {
    auto ctx = context("a2", {2, 4, 2});
    for (int a = 0; a < 2; ++a) {
        auto x = ctx.basis(Frame::coord, 0, a);
        auto d = ctx.quantum_product(ctx.string_field(), x) - x;
        for (const auto& c : d.c) CHECK(c.truncated(std::min(c.valid_degree(), 3)).is_zero());
    }
}

TEST_CASE("eta_hat is block diagonal") {
    auto ctx = context("a2", {2, 4, 2});
    auto e = ctx.eta_hat();
    REQUIRE(e.rows() == ctx.dim());
    for (int i = 0; i < ctx.dim(); ++i)
        for (int j = 0; j < ctx.dim(); ++j)
            if (i / 2 != j / 2) CHECK(e(i, j).is_zero());
}

TEST_CASE("bad truncations are rejected") {
    auto c = io::builtin_config("a2");
    auto m = io::to_model(c);
    CHECK_THROWS_AS(BigContext(m, {3, 5, 2}), big::TruncationError);
    CHECK_THROWS_AS(BigContext(m, {-1, 5, 2}), big::TruncationError);
}

TEST_CASE("a model failing WDVV is rejected") {
    auto bad = io::load_config(std::string(TTLIFT_MODELS_DIR) + "/a3_corrupted.json");
    CHECK_THROWS_AS(BigContext(io::to_model(bad), bad.truncation), small::InvalidModel);
}

TEST_CASE("metric-dependent objects need a real structure") {
    auto a3 = io::load_config(std::string(TTLIFT_MODELS_DIR) + "/a3.json");
    BigContext ctx(io::to_model(a3), a3.truncation);
    CHECK_FALSE(ctx.has_metric());
    CHECK_THROWS(ctx.h_hat());
}
