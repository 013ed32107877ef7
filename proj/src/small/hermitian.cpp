#include "small/model.hpp"

namespace ttlift::small {

SeriesMatrix HermitianData::h_adjoint(const SeriesMatrix& phi) const {
    return (Hinv * phi.transpose() * H).conjugate();
}

HermitianData hermitian_from_k(const FrobeniusData& d, const RealStructure& k) {
    const int N = d.model.N;
    const auto& ring = d.model.ring;
    HermitianData h;
    switch (k.kind) {
        case RealKind::K:
            h.K = k.matrix;
            h.H = d.eta * h.K;
            h.involution_required = true;
            break;
        case RealKind::H:
            h.H = k.matrix;
            h.K = d.eta_inv_m * h.H;
            h.involution_required = false;
            break;
        case RealKind::abs_a: {
            if (!k.a.constant_term().is_one()) throw InvalidModel("abs_a needs a(0) = 1");
            Series abs = (k.a * k.a.conjugate()).sqrt_unit();
            h.H = SeriesMatrix(ring, 1, 1);
            h.H(0, 0) = abs.scaled(d.model.eta[0][0]);
            h.K = d.eta_inv_m * h.H;
            h.involution_required = false;
            break;
        }
    }
    h.involution.add(h.K * h.K.conjugate() - SeriesMatrix::identity(ring, N));
    h.hermitian.add(h.H.transpose() - h.H.conjugate());
    const double tol = 1e-9;
    if (!h.hermitian.vanishes(ring->mode(), tol)) throw InvalidModel("h is not Hermitian (H^T != conj(H))");
    if (h.involution_required && !h.involution.vanishes(ring->mode(), tol))
        throw InvalidModel("real structure is not an involution (K conj(K) != Id)");
    try {
        h.Hinv = h.H.inverse();
    } catch (const DomainError&) {
        throw InvalidModel("h is degenerate at the origin");
    }
    h.Gamma.resize(N);
    for (int a = 0; a < N; ++a) h.Gamma[a] = (h.H.derivative(t0(a)) * h.Hinv).transpose();
    h.Curv.assign(N, std::vector<SeriesMatrix>(N));
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) h.Curv[a][b] = -h.Gamma[a].derivative(tb0(b));
    h.Cdag.resize(N);
    for (int b = 0; b < N; ++b) h.Cdag[b] = h.h_adjoint(d.C[b]);
    return h;
}

SeriesMatrix cov_derivative(const HermitianData& h, const SeriesMatrix& phi, int a) {
    return phi.derivative(t0(a)) + commutator(h.Gamma[a], phi);
}

SeriesMatrix first_tt_block(const FrobeniusData& d, const HermitianData& h, int a, int b) {
    return cov_derivative(h, d.C[b], a) - cov_derivative(h, d.C[a], b);
}

SeriesMatrix second_tt_block(const FrobeniusData& d, const HermitianData& h, int a, int b) {
    return h.Curv[a][b] + commutator(d.C[a], h.Cdag[b]);
}

SeriesMatrix compat_block(const FrobeniusData& d, const HermitianData& h, int a) {
    return -(h.Gamma[a].transpose() * d.eta + d.eta * h.Gamma[a]);
}

std::vector<NamedResidual> tt_and_potential_residuals_small(const FrobeniusData& d, const HermitianData& h) {
    const int N = d.model.N;
    const auto& ring = d.model.ring;
    std::vector<NamedResidual> out;
    auto push = [&](std::string id, Residual r, bool asserted, std::string note = {}) {
        if (r.terms == 0) r.add(Series(ring));
        out.push_back({std::move(id), r, asserted, std::move(note)});
    };
    Residual chern, adj, first, second, compat, invol;
    for (int a = 0; a < N; ++a) {
        chern.add(h.H.derivative(t0(a)) - h.Gamma[a].transpose() * h.H);
        adj.add(h.h_adjoint(h.Cdag[a]) - d.C[a]);
        compat.add(compat_block(d, h, a));
        for (int b = 0; b < N; ++b) {
            if (a < b) first.add(first_tt_block(d, h, a, b));
            first.add(d.C[a].derivative(tb0(b)));
            second.add(second_tt_block(d, h, a, b));
        }
    }
    push("small.chern.defining", chern, true, "d_a H = Gamma_a^T H");
    push("small.chern.adjoint_involution", adj, true, "(C^dagger)^dagger = C");
    push("small.hermitian.involution", h.involution, h.involution_required, "K conj(K) - Id");
    push("small.hermitian.symmetry", h.hermitian, true, "H^T - conj(H)");
    push("small.tt.first", first, false);
    push("small.tt.second", second, false);
    push("small.tt.compat", compat, false, "D eta");
    if (d.model.A) {
        const SeriesMatrix& A = *d.model.A;
        SeriesMatrix Ad = h.h_adjoint(A);
        Residual sa, a3, b3, c3;
        sa.add(d.eta_adjoint(A) - A);
        for (int a = 0; a < N; ++a) {
            a3.add(cov_derivative(h, A, a) - d.C[a]);
            b3.add(h.Gamma[a] + commutator(Ad, d.C[a]));
        }
        SeriesMatrix phi = d.Rinf + commutator(Ad, d.R0());
        c3.add(phi - h.h_adjoint(phi));
        push("small.potential.eta_selfadjoint", sa, false);
        push("small.potential.DA_eq_C", a3, false);
        push("small.potential.D_eq_nabla_minus_AdagC", b3, false);
        push("small.potential.Rinf_selfadjoint", c3, false);
    }
    if (d.model.cv) {
        const auto& U = d.model.cv->U;
        const auto& Q = d.model.cv->Q;
        SeriesMatrix kUk = h.K * U.conjugate() * h.K.conjugate();
        Residual i, iiU, iiQ, iiih, iiig;
        for (int a = 0; a < N; ++a) {
            i.add(commutator(d.C[a], U));
            iiU.add(cov_derivative(h, U, a) + commutator(d.C[a], Q) - d.C[a]);
            iiQ.add(cov_derivative(h, Q, a) - commutator(d.C[a], kUk));
        }
        iiih.add(Q - h.h_adjoint(Q));
        iiig.add(Q + d.eta_adjoint(Q));
        push("small.cv.C_commutes_U", i, false);
        push("small.cv.DU", iiU, false);
        push("small.cv.DQ", iiQ, false);
        push("small.cv.Q_h_selfadjoint", iiih, false);
        push("small.cv.Q_eta_skew", iiig, false);
    }
    return out;
}

}  // namespace ttlift::small
