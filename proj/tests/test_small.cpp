#include "doctest.h"
#include "io/config.hpp"
#include "oracles.hpp"

using namespace ttlift;
using small::t0;
using small::tb0;

namespace {

small::FrobeniusModel model_of(const std::string& name, int d_max = 6) {
    auto c = io::builtin_config(name);
    c.truncation.d_max = d_max;
    return io::to_model(c);
}

Series t(const RingPtr& r, int flavor) { return Series::variable(r, t0(flavor)); }

}  // namespace

TEST_CASE("gravity1d deformed flats are t^{i+1}/(i+1)!") {
    auto m = model_of("gravity1d");
    auto d = small::structure_constants(m);
    auto f = small::deformed_flats(d, 4);
    mpq_class fact = 1;
    for (int i = 0; i <= 4; ++i) {
        fact *= (i + 1);
        Series expect = t(m.ring, 0).pow(i + 1).scaled(m.ring->rational(mpq_class(1) / fact));
        CHECK((f.R[0][0][i] - expect).is_zero());
        Series theta = t(m.ring, 0).pow(i + 2).scaled(m.ring->rational(mpq_class(1) / (fact * (i + 2))));
        CHECK((f.theta[0][i] - theta).is_zero());
    }
    CHECK(small::flats_recursion_residual(d, f).exact_zero);
    CHECK(small::flats_string_residual(d, f).exact_zero);
}

TEST_CASE("a2 structure constants") {
    auto m = model_of("a2");
    auto d = small::structure_constants(m);
    const auto& r = m.ring;
    // unit
    CHECK((d.C[0] - SeriesMatrix::identity(r, 2)).is_zero());
    // gamma_2 o gamma_1 = gamma_2, gamma_2 o gamma_2 = (t2/3) gamma_1
    CHECK((d.C[1](1, 0) - Series::integer(r, 1)).is_zero());
    CHECK(d.C[1](0, 0).is_zero());
    CHECK((d.C[1](0, 1) - t(r, 1).scaled(r->rational(mpq_class(1, 3)))).is_zero());
    CHECK(d.C[1](1, 1).is_zero());
    CHECK(small::wdvv_residual(d).exact_zero);
    CHECK(d.r0_sign == -1);
}

TEST_CASE("A3 satisfies WDVV and a corrupted A3 does not") {
    auto a3 = io::load_config(std::string(TTLIFT_MODELS_DIR) + "/a3.json");
    auto d = small::structure_constants(io::to_model(a3));
    CHECK(small::wdvv_residual(d).exact_zero);
    auto bad = io::load_config(std::string(TTLIFT_MODELS_DIR) + "/a3_corrupted.json");
    auto db = small::structure_constants(io::to_model(bad));
    auto res = small::wdvv_residual(db);
    CHECK_FALSE(res.exact_zero);
    CHECK(res.max > 0);
}

TEST_CASE("small Saito residuals for a2 pick R0 = -C_E") {
    auto m = model_of("a2");
    auto d = small::structure_constants(m);
    for (const auto& e : small::saito_residuals_small(d)) {
        CAPTURE(e.id);
        CHECK_FALSE(e.asserted);
        bool expect_zero = e.id.find("[R0=+C_E]") == std::string::npos && e.id.find("[+d]") == std::string::npos;
        CHECK(e.residual.exact_zero == expect_zero);
    }
}

TEST_CASE("validate_model rejects bad input") {
    auto m = model_of("a2");
    SUBCASE("non-symmetric eta") {
        m.eta[0][1] = Scalar::integer(2, ScalarMode::rational);
        CHECK_THROWS_AS(small::validate_model(m), small::InvalidModel);
    }
    SUBCASE("singular eta") {
        m.eta = {{Scalar::integer(1, ScalarMode::rational), Scalar::integer(1, ScalarMode::rational)},
                 {Scalar::integer(1, ScalarMode::rational), Scalar::integer(1, ScalarMode::rational)}};
        CHECK_THROWS_AS(small::validate_model(m), small::InvalidModel);
    }
    SUBCASE("antiholomorphic prepotential") {
        m.F += Series::variable(m.ring, tb0(0)).pow(3);
        CHECK_THROWS_AS(small::validate_model(m), small::InvalidModel);
    }
    SUBCASE("unit out of range") {
        m.unit = 5;
        CHECK_THROWS_AS(small::validate_model(m), small::InvalidModel);
    }
}

TEST_CASE("gravity1d metric h = |1 + t0|") {
    auto m = model_of("gravity1d");
    auto d = small::structure_constants(m);
    auto h = small::hermitian_from_k(d, *m.real);
    const auto& r = m.ring;
    // |1+t|^2 = (1+t)(1+tb)
    Series one_t = Series::integer(r, 1) + t(r, 0);
    Series sq = one_t * one_t.conjugate();
    CHECK((h.H(0, 0) * h.H(0, 0) - sq).is_zero());
    // Gamma = d log h = 1 / (2 (1 + t))
    Series g(r);
    for (int k = 0; k < r->d_max(); ++k)
        g += t(r, 0).pow(k).scaled(r->rational(mpq_class(k % 2 ? -1 : 1, 2)));
    CHECK((h.Gamma[0](0, 0) - g).truncated(h.Gamma[0](0, 0).valid_degree()).is_zero());
    for (const auto& e : small::tt_and_potential_residuals_small(d, h)) {
        CAPTURE(e.id);
        if (e.id == "small.tt.first" || e.id == "small.tt.second" || e.id == "small.chern.defining")
            CHECK(e.residual.exact_zero);
        if (e.id == "small.tt.compat") CHECK_FALSE(e.residual.exact_zero);
    }
}

TEST_CASE("a2 metric is not a tt* solution but is Hermitian") {
    auto m = model_of("a2", 5);
    auto d = small::structure_constants(m);
    auto h = small::hermitian_from_k(d, *m.real);
    CHECK(h.hermitian.exact_zero);
    for (const auto& e : small::tt_and_potential_residuals_small(d, h)) {
        CAPTURE(e.id);
        if (e.asserted) CHECK(e.residual.exact_zero);
        if (e.id == "small.tt.second") CHECK_FALSE(e.residual.exact_zero);
    }
}

TEST_CASE("non-Hermitian H is rejected") {
    auto m = model_of("a2", 4);
    m.real->matrix(0, 1) += t(m.ring, 0);
    auto d = small::structure_constants(m);
    CHECK_THROWS_AS(small::hermitian_from_k(d, *m.real), small::InvalidModel);
}
