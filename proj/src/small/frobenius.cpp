#include <sstream>

#include "small/model.hpp"

namespace ttlift::small {

VarId t0(int flavor) { return {Sector::hol, 0, flavor}; }
VarId tb0(int flavor) { return {Sector::antihol, 0, flavor}; }

SeriesMatrix FrobeniusData::eta_adjoint(const SeriesMatrix& phi) const { return eta_inv_m * phi.transpose() * eta; }

void validate_model(const FrobeniusModel& m) {
    const int N = m.N;
    if (N < 1) throw InvalidModel("N must be positive");
    if (int(m.eta.size()) != N) throw InvalidModel("eta must be N x N");
    for (const auto& row : m.eta)
        if (int(row.size()) != N) throw InvalidModel("eta must be N x N");
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            if (m.eta[i][j] != m.eta[j][i]) throw InvalidModel("eta is not symmetric");
    try {
        invert_scalar_matrix(m.eta, m.ring->mode());
    } catch (const DomainError&) {
        throw InvalidModel("eta is singular");
    }
    if (m.unit < 0 || m.unit >= N) throw InvalidModel("unit index out of range");
    if (m.ring->n_max() != 0 || m.ring->n_flavors() != N) throw InvalidModel("model ring must be the small ring");
    if (!m.F.is_holomorphic()) throw InvalidModel("prepotential depends on antiholomorphic variables");
    if (int(m.euler.Q.size()) != N || int(m.euler.r.size()) != N) throw InvalidModel("Euler field has wrong size");
    for (const auto& row : m.euler.Q)
        if (int(row.size()) != N) throw InvalidModel("Euler field has wrong size");
    auto square = [&](const SeriesMatrix& s, const char* what) {
        if (s.rows() != N || s.cols() != N) throw InvalidModel(std::string(what) + " must be N x N");
    };
    if (m.A) square(*m.A, "potential A");
    if (m.cv) {
        square(m.cv->U, "cv.U");
        square(m.cv->Q, "cv.Q");
    }
    if (m.real) {
        if (m.real->kind == RealKind::abs_a) {
            if (N != 1) throw InvalidModel("abs_a real structure needs N = 1");
            if (!m.eta[0][0].is_real()) throw InvalidModel("abs_a real structure needs real eta");
        } else {
            square(m.real->matrix, "real structure");
        }
    }
}

FrobeniusData structure_constants(const FrobeniusModel& m) {
    FrobeniusData d;
    d.model = m;
    const int N = m.N;
    const auto& ring = m.ring;
    d.eta_inv = invert_scalar_matrix(m.eta, ring->mode());
    d.eta = SeriesMatrix::constant(ring, m.eta);
    d.eta_inv_m = SeriesMatrix::constant(ring, d.eta_inv);
    // lowered third derivatives
    std::vector<Series> dF(N);
    std::vector<std::vector<Series>> ddF(N, std::vector<Series>(N));
    for (int a = 0; a < N; ++a) dF[a] = m.F.derivative(t0(a));
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) ddF[a][b] = dF[a].derivative(t0(b));
    d.C.assign(N, SeriesMatrix(ring, N, N));
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
            for (int s = 0; s < N; ++s) {
                Series c3 = ddF[a][b].derivative(t0(s));
                if (c3.is_zero()) continue;
                for (int mu = 0; mu < N; ++mu)
                    if (!d.eta_inv[mu][s].is_zero()) d.C[a](mu, b) += c3.scaled(d.eta_inv[mu][s]);
            }
    d.E.assign(N, Series(ring));
    for (int a = 0; a < N; ++a) {
        Series e = Series::constant(ring, m.euler.r[a]);
        for (int b = 0; b < N; ++b) e += Series::variable(ring, t0(b)).scaled(m.euler.Q[a][b]);
        d.E[a] = e;
    }
    d.CE = SeriesMatrix(ring, N, N);
    for (int s = 0; s < N; ++s) d.CE += d.C[s].scaled(d.E[s]);
    d.Rinf = SeriesMatrix::constant(ring, m.euler.Q);

    Residual plus, minus;
    for (int a = 0; a < N; ++a) {
        SeriesMatrix rhs = commutator(d.C[a], d.Rinf);
        plus.add(d.CE.derivative(t0(a)) + d.C[a] - rhs);
        minus.add(-d.CE.derivative(t0(a)) + d.C[a] - rhs);
    }
    d.r0_sign = (plus.exact_zero || plus.max < 1e-9) && !(minus.exact_zero || minus.max < 1e-9) ? 1 : -1;
    return d;
}

Residual wdvv_residual(const FrobeniusData& d) {
    Residual r;
    for (int a = 0; a < d.model.N; ++a)
        for (int b = a + 1; b < d.model.N; ++b) r.add(commutator(d.C[a], d.C[b]));
    if (r.terms == 0) r.add(Series(d.model.ring));
    return r;
}

std::vector<NamedResidual> saito_residuals_small(const FrobeniusData& d) {
    const int N = d.model.N;
    const auto& ring = d.model.ring;
    std::vector<NamedResidual> out;
    auto push = [&](std::string id, Residual r, std::string note = {}) {
        if (r.terms == 0) r.add(Series(ring));
        out.push_back({std::move(id), r, false, std::move(note)});
    };
    Residual flat, dC, neta, cc, csa, flow_p, flow_m, comm, r0sa, nrinf, weight, lie_p, lie_m;
    // flat coordinates: the connection matrices of nabla vanish identically
    flat.add(SeriesMatrix(ring, N, N));
    SeriesMatrix CE = d.CE;
    for (int a = 0; a < N; ++a) {
        for (int b = 0; b < N; ++b) {
            dC.add(d.C[b].derivative(t0(a)) - d.C[a].derivative(t0(b)));
            if (a < b) cc.add(commutator(d.C[a], d.C[b]));
        }
        neta.add(d.eta.derivative(t0(a)));
        csa.add(d.eta_adjoint(d.C[a]) - d.C[a]);
        SeriesMatrix rhs = commutator(d.C[a], d.Rinf);
        flow_p.add(CE.derivative(t0(a)) + d.C[a] - rhs);
        flow_m.add(-CE.derivative(t0(a)) + d.C[a] - rhs);
        comm.add(commutator(CE, d.C[a]));
        nrinf.add(d.Rinf.derivative(t0(a)));
    }
    r0sa.add(d.eta_adjoint(CE) - CE);
    Scalar w = d.model.euler.weight_d.to_mode(ring->mode());
    weight.add(d.eta_adjoint(d.Rinf) + d.Rinf + SeriesMatrix::identity(ring, N).scaled(w));
    SeriesMatrix lie = d.Rinf.transpose() * d.eta + d.eta * d.Rinf;
    lie_p.add(lie - d.eta.scaled(w));
    lie_m.add(lie + d.eta.scaled(w));
    push("small.saito.curvature", flat);
    push("small.saito.dC", dC);
    push("small.saito.nabla_eta", neta);
    push("small.saito.CwedgeC", cc);
    push("small.saito.C_selfadjoint", csa);
    push("small.saito.R0_flow[R0=+C_E]", flow_p);
    push("small.saito.R0_flow[R0=-C_E]", flow_m);
    push("small.saito.R0_commute", comm);
    push("small.saito.R0_selfadjoint", r0sa);
    push("small.saito.nabla_Rinf", nrinf);
    push("small.saito.weight", weight, "Rinf* + Rinf + w Id with w = weight_d");
    push("small.saito.lie_eta[+d]", lie_p, "L_E eta - d eta");
    push("small.saito.lie_eta[-d]", lie_m, "L_E eta + d eta");
    return out;
}

}  // namespace ttlift::small
