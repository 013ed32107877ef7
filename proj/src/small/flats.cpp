#include "small/model.hpp"

namespace ttlift::small {

namespace {

// sum_g t^g * (1-form component g scaled by 1/(deg+1)); one degree more valid than the input
Series radial_integral(const RingPtr& ring, const std::vector<Series>& omega, const Scalar& at_origin) {
    std::vector<Term> terms;
    int valid = ring->d_max();
    for (size_t g = 0; g < omega.size(); ++g) {
        valid = std::min(valid, omega[g].valid_degree() + 1);
        MonoBits shift = mono_unit(ring->index(t0(int(g))));
        for (const auto& t : omega[g].terms()) {
            if (t.degree + 1 > ring->d_max()) continue;
            terms.push_back(Term{t.mono + shift, t.degree + 1, t.coeff * ring->rational(mpq_class(1, t.degree + 1))});
        }
    }
    if (!at_origin.is_zero()) terms.push_back(Term{0, 0, at_origin});
    return Series::from_terms(ring, std::move(terms), valid);
}

}  // namespace

DeformedFlats deformed_flats(const FrobeniusData& d, int i_max) {
    const int N = d.model.N;
    const auto& ring = d.model.ring;
    DeformedFlats f;
    f.i_max = i_max;
    f.theta.assign(N, std::vector<Series>(i_max + 1, Series(ring)));
    f.R.assign(N, std::vector<std::vector<Series>>(N, std::vector<Series>(i_max + 1, Series(ring))));
    for (int b = 0; b < N; ++b) {
        f.theta[b][0] = d.model.F.derivative(t0(b));
        for (int a = 0; a < N; ++a) f.R[a][b][0] = f.theta[b][0].derivative(t0(a));
    }
    for (int i = 1; i <= i_max; ++i) {
        for (int b = 0; b < N; ++b) {
            // G[a][g] = d_a d_g theta_{b,i} = c^s_{ag} R_{s,b,i-1}
            std::vector<std::vector<Series>> G(N, std::vector<Series>(N, Series(ring)));
            for (int a = 0; a < N; ++a)
                for (int g = 0; g < N; ++g)
                    for (int s = 0; s < N; ++s)
                        if (!d.C[a](s, g).is_zero()) G[a][g] += d.C[a](s, g) * f.R[s][b][i - 1];
            for (int a = 0; a < N; ++a)
                for (int g = 0; g < N; ++g)
                    for (int e = g + 1; e < N; ++e) {
                        Series mis = G[a][g].derivative(t0(e)) - G[a][e].derivative(t0(g));
                        if (!mis.is_zero() && (ring->mode() == ScalarMode::rational || mis.max_magnitude() > 1e-9))
                            throw IntegrabilityError("mixed partials disagree for theta_{" + std::to_string(b + 1) +
                                                     "," + std::to_string(i) + "}");
                    }
            Scalar th0 = ring->zero();
            if (b < int(d.model.theta_constants.size()) && i < int(d.model.theta_constants[b].size()))
                th0 = d.model.theta_constants[b][i];
            std::vector<Series> grad(N);
            for (int a = 0; a < N; ++a) {
                Scalar r0 = a == d.model.unit ? f.theta[b][i - 1].constant_term() : ring->zero();
                grad[a] = radial_integral(ring, G[a], r0);
                f.R[a][b][i] = grad[a];
            }
            f.theta[b][i] = radial_integral(ring, grad, th0);
        }
    }
    return f;
}

Residual flats_recursion_residual(const FrobeniusData& d, const DeformedFlats& f) {
    const int N = d.model.N;
    Residual r;
    for (int b = 0; b < N; ++b) {
        for (int a = 0; a < N; ++a) r.add(f.theta[b][0].derivative(t0(a)) - f.R[a][b][0]);
        for (int i = 1; i <= f.i_max; ++i)
            for (int a = 0; a < N; ++a)
                for (int g = 0; g < N; ++g) {
                    Series lhs = f.theta[b][i].derivative(t0(a)).derivative(t0(g));
                    Series rhs(d.model.ring);
                    for (int s = 0; s < N; ++s) rhs += d.C[a](s, g) * f.theta[b][i - 1].derivative(t0(s));
                    r.add(lhs - rhs);
                    if (g == 0) r.add(f.theta[b][i].derivative(t0(a)) - f.R[a][b][i]);
                }
    }
    return r;
}

Residual flats_string_residual(const FrobeniusData& d, const DeformedFlats& f) {
    const int N = d.model.N;
    const auto& ring = d.model.ring;
    Residual r;
    for (int b = 0; b < N; ++b) {
        Series lin(ring);
        for (int s = 0; s < N; ++s) lin += Series::variable(ring, t0(s)).scaled(d.model.eta[b][s]);
        r.add(f.theta[b][0].derivative(t0(d.model.unit)) - lin);
        for (int i = 1; i <= f.i_max; ++i) r.add(f.theta[b][i].derivative(t0(d.model.unit)) - f.theta[b][i - 1]);
    }
    return r;
}

}  // namespace ttlift::small
