#include <random>

#include "core/matrix.hpp"
#include "core/series.hpp"
#include "doctest.h"

using namespace ttlift;

namespace {

VarId hv(int level, int flavor = 0) { return {Sector::hol, level, flavor}; }
VarId av(int level, int flavor = 0) { return {Sector::antihol, level, flavor}; }

Series rnd(const RingPtr& r, std::mt19937& g, int terms, int maxdeg) {
    std::vector<Term> t;
    std::uniform_int_distribution<int> var(0, r->num_vars() - 1), co(-3, 3), deg(0, maxdeg);
    for (int k = 0; k < terms; ++k) {
        MonoBits m = 0;
        int d = deg(g);
        for (int j = 0; j < d; ++j) m += mono_unit(var(g));
        t.push_back(Term{m, 0, Scalar::gaussian(co(g), co(g), r->mode())});
    }
    return Series::from_terms(r, t, r->d_max());
}

}  // namespace

TEST_CASE("difference of squares") {
    auto r = make_ring(1, 2, 6, ScalarMode::rational);
    auto t = Series::variable(r, hv(0));
    auto one = Series::integer(r, 1);
    auto p = (t + one) * (t - one);
    CHECK((p - (t * t - one)).is_zero());
    CHECK(p.to_string() == "-1 + t1_0^2");
}

TEST_CASE("valid degree min rule and truncation") {
    auto r = make_ring(1, 1, 6, ScalarMode::rational);
    auto x = Series::variable(r, hv(0)).truncated(6);
    auto y = Series::variable(r, hv(0)).truncated(4);
    CHECK((x * y).valid_degree() == 4);
    auto a = Series::variable(r, hv(0)).pow(3);
    auto b = Series::variable(r, hv(0)).pow(4);
    auto c = a * b;
    CHECK(c.is_zero());
    CHECK(c.valid_degree() == 6);
}

TEST_CASE("partial derivatives") {
    auto r = make_ring(1, 2, 6, ScalarMode::rational);
    auto t0 = Series::variable(r, hv(0)), t1 = Series::variable(r, hv(1));
    auto f = t0 * t0 * t1;
    CHECK((f.derivative(hv(0)) - (t0 * t1).scaled(r->integer(2))).is_zero());
    CHECK(f.derivative(av(0)).is_zero());
    CHECK(f.derivative(hv(0)).valid_degree() == 5);
}

TEST_CASE("ring axioms, Leibniz and mixed partials on random samples") {
    auto r = make_ring(2, 1, 5, ScalarMode::rational);
    std::mt19937 g(11);
    for (int s = 0; s < 10; ++s) {
        auto a = rnd(r, g, 5, 3), b = rnd(r, g, 5, 3), c = rnd(r, g, 5, 3);
        CHECK(((a * b) * c - a * (b * c)).is_zero());
        CHECK((a * b - b * a).is_zero());
        CHECK((a * (b + c) - (a * b + a * c)).is_zero());
        for (int v = 0; v < r->num_vars(); ++v) {
            auto lhs = (a * b).derivative(v);
            auto rhs = a.derivative(v) * b + a * b.derivative(v);
            CHECK((lhs - rhs).truncated(lhs.valid_degree()).is_zero());
            int w = (v + 3) % r->num_vars();
            CHECK((a.derivative(v).derivative(w) - a.derivative(w).derivative(v)).is_zero());
        }
    }
}

TEST_CASE("substitution") {
    auto r = make_ring(1, 2, 6, ScalarMode::rational);
    auto t0 = Series::variable(r, hv(0)), t1 = Series::variable(r, hv(1));
    Substitution sub(r);
    sub.set(hv(0), t0 + t1 * t0);
    auto out = sub.apply(t0 * t0);
    auto expect = t0 * t0 + (t1 * t0 * t0).scaled(r->integer(2)) + t1 * t1 * t0 * t0;
    CHECK((out - expect).is_zero());

    Substitution ident(r);
    auto f = t0 * t1 + t0;
    CHECK((ident.apply(f) - f).is_zero());

    Substitution bad(r);
    bad.set(hv(0), t0 + Series::integer(r, 1));
    CHECK_THROWS_AS(bad.apply(f), CompositionError);
    CHECK_NOTHROW(bad.apply(f, true));
}

TEST_CASE("chain rule for substitution") {
    auto r = make_ring(2, 1, 5, ScalarMode::rational);
    std::mt19937 g(5);
    auto f = rnd(r, g, 6, 3);
    Substitution sub(r);
    std::vector<Series> img;
    for (int i = 0; i < r->num_vars(); ++i) {
        auto s = rnd(r, g, 3, 2);
        s = s - Series::constant(r, s.constant_term());
        img.push_back(s);
        sub.set(r->var(i), s);
    }
    auto comp = sub.apply(f);
    for (int v = 0; v < r->num_vars(); ++v) {
        Series rhs(r);
        for (int w = 0; w < r->num_vars(); ++w) rhs += sub.apply(f.derivative(w)) * img[w].derivative(v);
        auto lhs = comp.derivative(v);
        int win = std::min(lhs.valid_degree(), rhs.valid_degree());
        CHECK((lhs - rhs).truncated(win).is_zero());
    }
}

TEST_CASE("conjugation") {
    auto r = make_ring(1, 1, 6, ScalarMode::rational);
    auto t = Series::variable(r, hv(0));
    auto it = t.scaled(Scalar::imag_unit(ScalarMode::rational));
    auto expect = Series::variable(r, av(0)).scaled(-Scalar::imag_unit(ScalarMode::rational));
    CHECK((it.conjugate() - expect).is_zero());
    std::mt19937 g(3);
    for (int s = 0; s < 5; ++s) {
        auto a = rnd(r, g, 6, 3), b = rnd(r, g, 6, 3);
        CHECK((a.conjugate().conjugate() - a).is_zero());
        CHECK(((a * b).conjugate() - a.conjugate() * b.conjugate()).is_zero());
        CHECK((a.restrict_small().conjugate() - a.conjugate().restrict_small()).is_zero());
    }
}

TEST_CASE("sqrt_unit") {
    auto r = make_ring(1, 1, 6, ScalarMode::rational);
    auto t = Series::variable(r, hv(0)), tb = Series::variable(r, av(0));
    auto one = Series::integer(r, 1);
    CHECK(((one + t + t + t * t).sqrt_unit() - (one + t)).is_zero());
    CHECK((one.sqrt_unit() - one).is_zero());
    auto a = (one + t) * (one + tb);
    auto s = a.sqrt_unit();
    CHECK((s * s - a).is_zero());
    CHECK_THROWS_AS((t + t).sqrt_unit(), DomainError);
}

TEST_CASE("restrict_small") {
    auto r = make_ring(1, 2, 6, ScalarMode::rational);
    auto x = Series::variable(r, hv(2)) * Series::variable(r, hv(0));
    CHECK(x.restrict_small().is_zero());
    CHECK(!Series::variable(r, av(0)).restrict_small().is_zero());
}

TEST_CASE("inverse and matrix inverse") {
    auto r = make_ring(2, 0, 6, ScalarMode::rational);
    auto t = Series::variable(r, hv(0)), u = Series::variable(r, av(0, 1));
    auto one = Series::integer(r, 1);
    auto f = one + t + u * t;
    CHECK((f * f.inverse() - one).is_zero());
    SeriesMatrix m(r, 2, 2);
    m(0, 0) = Series::integer(r, 2) + t;
    m(0, 1) = one + u;
    m(1, 0) = one;
    m(1, 1) = Series::integer(r, 3) + t * u;
    auto prod = m * m.inverse();
    CHECK((prod - SeriesMatrix::identity(r, 2)).is_zero());
}

TEST_CASE("mismatched contexts") {
    auto r1 = make_ring(1, 1, 6, ScalarMode::rational);
    auto r2 = make_ring(1, 2, 6, ScalarMode::rational);
    CHECK_THROWS_AS(Series::integer(r1, 1) + Series::integer(r2, 1), ContextError);
    auto r3 = make_ring(1, 1, 6, ScalarMode::rational);
    CHECK_NOTHROW(Series::integer(r1, 1) + Series::integer(r3, 1));
}

TEST_CASE("float mode") {
    auto r = make_ring(1, 1, 6, ScalarMode::floating);
    auto t = Series::variable(r, hv(0));
    auto one = Series::integer(r, 1);
    auto s = ((one + t) * (one + t)).sqrt_unit();
    CHECK((s - (one + t)).max_magnitude() < 1e-12);
}

TEST_CASE("scalar parsing") {
    auto s = Scalar::parse("1/3", "-2/6", ScalarMode::rational);
    CHECK(s.re_string() == "1/3");
    CHECK(s.im_string() == "-1/3");
    CHECK_THROWS(Scalar::parse("1/0", "0", ScalarMode::rational));
    CHECK_THROWS(Scalar::parse("abc", "0", ScalarMode::rational));
}
