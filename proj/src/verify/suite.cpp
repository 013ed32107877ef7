#include "verify/suite.hpp"

#include <cstdio>
#include <functional>
#include <future>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ttlift::verify {

using big::BigContext;
using big::Frame;
using big::FrameVector;
using big::Route;
using small::t0;
using small::tb0;

const std::vector<std::string>& check_groups() {
    static const std::vector<std::string> g = {"model", "lift", "frame", "aux", "metric", "saito_hat", "ttstar_hat", "lax"};
    return g;
}

std::vector<std::string> parse_groups(const std::string& csv) {
    std::vector<std::string> out;
    if (csv.empty() || csv == "all") return out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        bool known = false;
        for (const auto& g : check_groups()) known = known || g == item;
        if (!known) throw std::invalid_argument("unknown check group '" + item + "'");
        out.push_back(item);
    }
    return out;
}

std::string status_name(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        default: return "skipped";
    }
}

namespace {

struct Collector {
    std::string group;
    std::uint64_t seed;
    ScalarMode mode;
    double tol;
    std::vector<Entry> out;

    void add(const std::string& id, Residual r, bool asserted, const std::string& band, int samples,
             const std::string& note = {}) {
        Entry e;
        e.id = group + "." + id;
        e.group = group;
        e.asserted = asserted;
        if (r.terms == 0) r.window = 0;
        e.max_residual = r.exact_zero ? 0.0 : r.max;
        e.exact_zero = r.exact_zero;
        e.window = r.window_or(0);
        e.status = r.vanishes(mode, tol) ? Status::pass : Status::fail;
        e.level_band = band;
        e.samples = samples;
        e.seed = seed;
        e.note = note;
        out.push_back(e);
    }
    void add(const NamedResidual& n, const std::string& band) {
        add(n.id, n.residual, n.asserted, band, n.residual.terms, n.note);
    }
    void skip(const std::string& id, const std::string& note) {
        Entry e;
        e.id = group + "." + id;
        e.group = group;
        e.status = Status::skipped;
        e.asserted = false;
        e.seed = seed;
        e.note = note;
        out.push_back(e);
    }
};

// Small random integers straight from the engine so runs agree across standard libraries.
struct Sampler {
    std::mt19937_64 rng;
    Sampler(std::uint64_t seed, std::uint64_t salt) : rng(seed * 0x9E3779B97F4A7C15ULL + salt) {}
    int pick(int lo, int hi) { return lo + int(rng() % std::uint64_t(hi - lo + 1)); }
    int nonzero(int mag) {
        for (;;) {
            int v = pick(-mag, mag);
            if (v != 0) return v;
        }
    }
};

std::string band(int lo, int hi) { return "n=" + std::to_string(lo) + ".." + std::to_string(hi); }

FrameVector tf(const BigContext& c, int n, int a) { return c.basis(Frame::tframe, n, a); }
FrameVector cf(const BigContext& c, int n, int a) { return c.basis(Frame::coord, n, a); }

// Random hol vector with small integer coefficients, optionally plus a linear
// term in a random coordinate so function-linearity is exercised.
FrameVector random_vector(const BigContext& c, Sampler& s, Frame f, int max_level, bool series) {
    FrameVector v = c.zero(f);
    const auto& ring = c.ring();
    for (int n = 0; n <= max_level; ++n)
        for (int a = 0; a < c.N(); ++a) {
            Series coef = Series::integer(ring, s.pick(-2, 2));
            if (series && s.pick(0, 2) == 0) {
                VarId var{Sector::hol, s.pick(0, c.n_max()), s.pick(0, c.N() - 1)};
                coef += Series::variable(ring, var).scaled(ring->integer(s.nonzero(2)));
            }
            v.c[c.idx(n, a)] = coef;
        }
    return v;
}

// Random function of level-0 variables of both sectors, degree <= 3.
Series random_small_function(const RingPtr& ring, Sampler& s) {
    const int N = ring->n_flavors();
    Series f = Series::constant(ring, Scalar::gaussian(s.pick(-2, 2), s.pick(-1, 1), ring->mode()));
    for (int k = 0; k < 3; ++k) {
        std::vector<std::pair<VarId, int>> exps;
        int factors = s.pick(1, 3);
        for (int q = 0; q < factors; ++q) {
            VarId v{s.pick(0, 1) ? Sector::antihol : Sector::hol, 0, s.pick(0, N - 1)};
            bool merged = false;
            for (auto& e : exps)
                if (e.first == v) {
                    ++e.second;
                    merged = true;
                }
            if (!merged) exps.push_back({v, 1});
        }
        f += Series::monomial(ring, exps, Scalar::gaussian(s.nonzero(3), s.pick(-1, 1), ring->mode()));
    }
    return f;
}

Series pair_eta(const BigContext& c, const FrameVector& x, const FrameVector& y) {
    Series acc(c.ring());
    const auto& eta = c.frob().model.eta;
    for (int n = 0; n <= c.n_max(); ++n)
        for (int a = 0; a < c.N(); ++a)
            for (int b = 0; b < c.N(); ++b)
                if (!eta[a][b].is_zero()) acc += (x.c[c.idx(n, a)] * y.c[c.idx(n, b)]).scaled(eta[a][b]);
    return acc;
}

SeriesMatrix eta_adjoint_hat(const BigContext& c, const SeriesMatrix& phi) {
    SeriesMatrix etainv = c.blockdiag(SeriesMatrix::constant(c.ring(), c.frob().eta_inv));
    return etainv * phi.transpose() * c.eta_hat();
}

SeriesMatrix h_adjoint_hat(const BigContext& c, const SeriesMatrix& phi) {
    return (c.h_hat_inverse() * phi.transpose() * c.h_hat()).conjugate();
}

// blockdiag( sum_{a,b} x_{0,a} y_{0,b} sum_{s,n} M(s,a) M'(n,b) lift(blocks[s][n]) ), M' = M or conj(M)
SeriesMatrix transport2(const BigContext& c, const std::vector<std::vector<SeriesMatrix>>& lifted, const FrameVector& x,
                        const FrameVector& y, bool conj_second) {
    FrameVector xt = c.to_tframe(x), yt = c.to_tframe(y);
    const int N = c.N();
    SeriesMatrix acc(c.ring(), N, N);
    for (int a = 0; a < N; ++a) {
        if (xt.c[a].is_zero()) continue;
        for (int b = 0; b < N; ++b) {
            if (yt.c[b].is_zero()) continue;
            Series w = xt.c[a] * yt.c[b];
            for (int s = 0; s < N; ++s)
                for (int n = 0; n < N; ++n) {
                    if (lifted[s][n].is_zero()) continue;
                    Series m2 = conj_second ? c.M()(n, b).conjugate() : c.M()(n, b);
                    acc += lifted[s][n].scaled(w * c.M()(s, a) * m2);
                }
        }
    }
    return c.blockdiag(acc);
}

std::vector<std::vector<SeriesMatrix>> lift_blocks2(const BigContext& c,
                                                    const std::function<SeriesMatrix(int, int)>& f) {
    std::vector<std::vector<SeriesMatrix>> out(c.N(), std::vector<SeriesMatrix>(c.N()));
    for (int s = 0; s < c.N(); ++s)
        for (int n = 0; n < c.N(); ++n) out[s][n] = c.lift(f(s, n));
    return out;
}

bool small_vanishes(const BigContext& c, const Residual& r, double tol) { return r.vanishes(c.ring()->mode(), tol); }

const char* kNeedsMetric = "needs a real structure";

// ---------------------------------------------------------------- model

void group_model(const BigContext& c, Collector& col) {
    const auto& d = c.frob();
    col.add("wdvv", small::wdvv_residual(d), true, "n=0", d.model.N * d.model.N);
    Residual unit;
    unit.add(d.C[d.model.unit] - SeriesMatrix::identity(d.model.ring, d.model.N));
    col.add("unit_axiom", unit, true, "n=0", 1);
    for (const auto& n : small::saito_residuals_small(d)) {
        NamedResidual m = n;
        m.id = n.id.substr(std::string("small.").size());
        col.add(m, "n=0");
    }
    col.add("flats.recursion", small::flats_recursion_residual(d, c.flats()), true, "n=0", c.i_max());
    col.add("flats.string", small::flats_string_residual(d, c.flats()), true, "n=0", c.i_max());
    if (c.herm()) {
        for (const auto& n : small::tt_and_potential_residuals_small(d, *c.herm())) {
            NamedResidual m = n;
            m.id = n.id.substr(std::string("small.").size());
            col.add(m, "n=0");
        }
    } else {
        col.skip("chern.defining", kNeedsMetric);
        col.skip("tt.first", kNeedsMetric);
        col.skip("tt.second", kNeedsMetric);
    }
}

// ---------------------------------------------------------------- lift

void group_lift(const BigContext& c, Collector& col, Sampler& s) {
    const int N = c.N();
    const auto& ring = c.ring();
    const auto& sr = c.small_ring();
    const std::string full = band(0, c.n_max());
    Residual ures, mres;
    for (int a = 0; a < N; ++a) {
        ures.add(c.u()[a].restrict_small() - Series::variable(ring, t0(a)));
        for (int b = 0; b < N; ++b) mres.add(c.M()(a, b).restrict_small() - Series::integer(ring, a == b ? 1 : 0));
    }
    col.add("u_restriction", ures, true, full, N, "restrict_small(u) = t0");
    col.add("M_restriction", mres, true, full, N * N, "M restricted to the small phase space is Id");

    const int nf = 10;
    std::vector<Series> fs, gs;
    for (int k = 0; k < nf; ++k) fs.push_back(random_small_function(sr, s));
    for (int k = 0; k < nf; ++k) gs.push_back(random_small_function(sr, s));
    Residual ringmap, conjc, chain;
    for (int k = 0; k < nf; ++k) {
        ringmap.add(c.lift(fs[k] * gs[k]) - c.lift(fs[k]) * c.lift(gs[k]));
        conjc.add(c.lift(fs[k].conjugate()) - c.lift(fs[k]).conjugate());
        Series lf = c.lift(fs[k]);
        for (int a = 0; a < N; ++a) {
            Series rhs(ring);
            for (int b = 0; b < N; ++b) rhs += c.lift(fs[k].derivative(t0(b))) * c.M()(b, a);
            chain.add(c.apply(cf(c, 0, a), lf) - rhs);
        }
    }
    col.add("ring_map", ringmap, true, full, nf);
    col.add("conj_commutes", conjc, true, full, nf);
    col.add("primary_derivative", chain, true, "n=0", nf * N, "tau_{0,a}(f^) = lift(df) M");

    Residual tp;
    for (int a = 0; a < N; ++a) tp.add(c.two_point(0, c.frob().model.unit, a) - c.u_lower()[a]);
    col.add("two_point_u", tp, true, "n=0", N, "<<tau_{0,unit} gamma_a>> = u_a");

    if (c.n_max() < 1) {
        for (auto id : {"kill_rule", "kill_rule_conj", "M_derivative_q1", "M_symmetry", "M_derivative_q2"})
            col.skip(id, "needs n_max >= 1");
    } else {
        Residual kill, killc;
        for (int k = 0; k < nf; ++k) {
            Series lf = c.lift(fs[k]);
            FrameVector W = random_vector(c, s, Frame::coord, c.n_max() - 1, true);
            FrameVector TW = c.T(W);
            kill.add(c.apply(TW, lf));
            killc.add(c.apply(TW.conj(), lf));
        }
        col.add("kill_rule", kill, true, band(1, c.n_max()), nf, "T(W)(f^) = 0");
        col.add("kill_rule_conj", killc, true, band(1, c.n_max()), nf, "conj(T(W))(f^) = 0");

        std::vector<std::vector<FrameVector>> prod(N, std::vector<FrameVector>(N));
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b) prod[a][b] = c.quantum_product(cf(c, 0, a), cf(c, 0, b));
        Residual q1, sym, q2;
        for (int b = 0; b < N; ++b) {
            FrameVector Tb = c.T(cf(c, 0, b));
            for (int a = 0; a < N; ++a)
                for (int sg = 0; sg < N; ++sg) {
                    Series lhs = c.apply(Tb, c.M()(sg, a));
                    Series rhs(ring);
                    for (int mu = 0; mu < N; ++mu) rhs += c.M()(sg, mu) * prod[a][b].c[mu];
                    q1.add(lhs - rhs);
                    sym.add(lhs - c.apply(c.T(cf(c, 0, a)), c.M()(sg, b)));
                }
            for (int q = 2; q <= c.n_max(); ++q) {
                FrameVector Tq = c.to_coord(tf(c, q, b));
                for (int a = 0; a < N; ++a)
                    for (int sg = 0; sg < N; ++sg) q2.add(c.apply(Tq, c.M()(sg, a)));
            }
        }
        col.add("M_derivative_q1", q1, true, band(0, 1), N * N * N, "T(tau_{0,b})(M^s_a) = (gamma_a o gamma_b)(u^s)");
        col.add("M_symmetry", sym, true, band(0, 1), N * N * N);
        if (c.n_max() >= 2) col.add("M_derivative_q2", q2, true, band(2, c.n_max()), (c.n_max() - 1) * N * N * N);
        else col.skip("M_derivative_q2", "needs n_max >= 2");
    }

    // rescaled coordinates t_k = k! s_k: u_a = eta s_0 + sum (i+1)! s_{i+1} R(u)
    {
        auto ul = c.dw_rescaled(c.u_lower());
        auto uu = c.dw_rescaled(c.u());
        Substitution sub(ring);
        for (int a = 0; a < N; ++a) {
            sub.set(t0(a), uu[a]);
            sub.set(tb0(a), uu[a].conjugate());
        }
        Residual dw;
        const auto& eta = c.frob().model.eta;
        for (int a = 0; a < N; ++a) {
            Series rhs(ring);
            for (int g = 0; g < N; ++g)
                if (!eta[a][g].is_zero()) rhs += Series::variable(ring, t0(g)).scaled(eta[a][g]);
            mpz_class fact = 1;
            for (int i = 0; i + 1 <= c.n_max(); ++i) {
                fact *= (i + 1);
                for (int b = 0; b < N; ++b) {
                    const Series& r = c.flats().R[a][b][i];
                    if (r.is_zero()) continue;
                    rhs += (Series::variable(ring, {Sector::hol, i + 1, b}) * sub.apply(r)).scaled(ring->rational(mpq_class(fact)));
                }
            }
            dw.add(ul[a] - rhs);
        }
        col.add("dw_fixed_point", dw, true, full, N, "u in t_k = k! s_k solves u = eta s_0 + sum (i+1)! s_{i+1} R(u)");
    }
}

// ---------------------------------------------------------------- frame

void group_frame(const BigContext& c, Collector& col, Sampler& s) {
    const int N = c.N();
    const int nm = c.n_max();
    const auto& ring = c.ring();
    std::vector<std::vector<FrameVector>> prod(N, std::vector<FrameVector>(N));
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) prod[a][b] = c.quantum_product(cf(c, 0, a), cf(c, 0, b));

    Residual unit, comm, chat, routes, sym;
    for (int a = 0; a < N; ++a) {
        FrameVector d = c.quantum_product(c.string_field(), cf(c, 0, a)) - cf(c, 0, a);
        for (const auto& x : d.c) unit.add(x);
    }
    col.add("string_unit", unit, true, "n=0", N, "S o W = W for primary W");
    for (int a = 0; a < N; ++a) {
        SeriesMatrix C = c.C_hat(tf(c, 0, a));
        for (int b = 0; b < N; ++b) {
            for (int mu = 0; mu < N; ++mu) chat.add(prod[a][b].c[mu] - C(c.idx(0, mu), c.idx(0, b)));
            for (int sg = 0; sg < N; ++sg)
                sym.add(c.three_point_derivative(0, a, 0, b, sg) - c.three_point_derivative(0, sg, 0, b, a));
        }
    }
    col.add("qp_equals_C_hat", chat, true, "n=0", N * N);
    col.add("three_point_symmetry", sym, true, "n=0", N * N * N);
    for (int m = 0; m <= nm; ++m)
        for (int n = 0; n <= nm; ++n)
            for (int a = 0; a < N; ++a)
                for (int b = 0; b < N; ++b)
                    for (int sg = 0; sg < N; ++sg)
                        routes.add(c.three_point(m, a, n, b, 0, sg) - c.three_point_derivative(m, a, n, b, sg));
    col.add("three_point_routes", routes, true, band(0, nm), (nm + 1) * (nm + 1) * N * N * N,
            "recursion route vs derivative of the two-point lift");
    const int nr = 5;
    for (int k = 0; k < nr; ++k) {
        FrameVector x = random_vector(c, s, Frame::coord, nm, true), y = random_vector(c, s, Frame::coord, nm, true);
        FrameVector d = c.quantum_product(x, y) - c.quantum_product(y, x);
        for (const auto& v : d.c) comm.add(v);
    }
    col.add("qp_commutative", comm, true, band(0, nm), nr);

    if (nm < 1) {
        for (auto id : {"T_routes", "T_origin", "bracket_descendant", "bracket_primary", "trr[trr]", "trr[derivative]"})
            col.skip(id, "needs n_max >= 1");
        return;
    }
    Residual tr, origin;
    int samples = 0;
    std::vector<FrameVector> ws;
    for (int n = 0; n < nm; ++n)
        for (int a = 0; a < N; ++a) ws.push_back(cf(c, n, a));
    const size_t nbasis = ws.size();
    for (int k = 0; k < nr; ++k) ws.push_back(random_vector(c, s, Frame::coord, nm - 1, true));
    for (size_t k = 0; k < ws.size(); ++k) {
        FrameVector d = c.T(ws[k]) - c.T_definitional(ws[k]);
        for (const auto& v : d.c) tr.add(v);
        ++samples;
        if (k < nbasis) {
            FrameVector o = c.T(ws[k]) - c.tau_plus(ws[k]);
            for (const auto& v : o.c) origin.add(Series::constant(ring, v.constant_term()));
        }
    }
    col.add("T_routes", tr, true, band(0, nm), samples, "closed form vs tau_+ - S o tau_+");
    col.add("T_origin", origin, true, band(0, nm), int(nbasis), "T(W) = tau_+(W) at the origin");

    Residual bd, bp;
    for (int n = 1; n <= nm; ++n)
        for (int a = 0; a < N; ++a) {
            for (int m = 1; m <= nm; ++m)
                for (int b = 0; b < N; ++b) {
                    FrameVector br = c.bracket(tf(c, n, a), tf(c, m, b));
                    for (const auto& v : br.c) bd.add(v);
                }
            for (int b = 0; b < N; ++b) {
                FrameVector rhs = prod[a][b];
                for (int k = 1; k < n; ++k) rhs = c.T(rhs);
                FrameVector d = c.bracket(tf(c, n, a), tf(c, 0, b)) - rhs;
                for (const auto& v : d.c) bp.add(v);
            }
        }
    col.add("bracket_descendant", bd, true, band(1, nm), nm * nm * N * N, "[T^n g_a, T^m g_b] = 0");
    col.add("bracket_primary", bp, true, band(0, nm), nm * N * N, "[T^n g_a, g_b] = T^{n-1}(g_a o g_b)");

    const int nw2 = 20;
    std::vector<FrameVector> w2;
    for (int k = 0; k < nw2; ++k) w2.push_back(random_vector(c, s, Frame::coord, nm, k % 2 == 1));
    Residual trr, trd;
    int cnt = 0;
    for (int n = 0; n < nm; ++n)
        for (int a = 0; a < N; ++a) {
            FrameVector w1 = c.T(c.to_coord(tf(c, n, a)));
            for (const auto& w : w2) {
                for (const auto& v : c.quantum_product(w1, w).c) trr.add(v);
                for (const auto& v : c.quantum_product(w1, w, Route::derivative).c) trd.add(v);
                ++cnt;
            }
        }
    col.add("trr[trr]", trr, true, band(0, nm), cnt, "T(W1) o W2 = 0, correlators by recursion");
    col.add("trr[derivative]", trd, true, band(0, nm), cnt, "T(W1) o W2 = 0, correlators by differentiating two-point lifts");
}

// ---------------------------------------------------------------- aux

void group_aux(const BigContext& c, Collector& col, Sampler& s) {
    const int N = c.N();
    const int nm = c.n_max();
    Residual unit, compat, degen, corr;
    FrameVector sh = c.s_hat();
    for (int n = 0; n <= nm; ++n)
        for (int a = 0; a < N; ++a) {
            FrameVector d = c.diamond(sh, tf(c, n, a)) - tf(c, n, a);
            for (const auto& v : d.c) unit.add(v);
        }
    col.add("s_hat_unit", unit, true, band(0, nm), (nm + 1) * N, "S^ diamond W = W");
    const int nr = 5;
    for (int k = 0; k < nr; ++k) {
        FrameVector x = random_vector(c, s, Frame::tframe, nm, true), y = random_vector(c, s, Frame::tframe, nm, true),
                    z = random_vector(c, s, Frame::tframe, nm, true);
        compat.add(pair_eta(c, c.diamond(x, y), z) - pair_eta(c, x, c.diamond(y, z)));
    }
    col.add("eta_diamond_compat", compat, true, band(0, nm), nr);
    if (nm < 1) {
        col.skip("degenerate_T", "needs n_max >= 1");
    } else {
        int cnt = 0;
        for (int n = 0; n < nm; ++n)
            for (int a = 0; a < N; ++a) {
                FrameVector tw = c.T(cf(c, n, a));
                for (int k = 0; k < nr; ++k) {
                    degen.add(c.degenerate_pairing(tw, random_vector(c, s, Frame::coord, nm, true)));
                    ++cnt;
                }
            }
        col.add("degenerate_T", degen, true, band(0, nm), cnt, "<<S T(W) V>> = 0");
    }
    const auto& eta = c.frob().model.eta;
    for (int n = 0; n <= nm; ++n)
        for (int m = 0; m <= nm; ++m)
            for (int a = 0; a < N; ++a)
                for (int b = 0; b < N; ++b) {
                    Series v = c.eta_hat_correlator(tf(c, n, a), tf(c, m, b));
                    if (n == m) v -= Series::constant(c.ring(), eta[a][b]);
                    corr.add(v);
                }
    col.add("eta_hat_correlator", corr, true, band(0, nm), (nm + 1) * (nm + 1) * N * N,
            "sum_k <<S tau_-^k W tau_-^k V>> against the block form");
}

// ---------------------------------------------------------------- metric

void group_metric(const BigContext& c, Collector& col, Sampler& s) {
    const int N = c.N();
    const int nm = c.n_max();
    const auto& ring = c.ring();
    const std::string full = band(0, nm);
    {
        Residual r;
        SeriesMatrix e = c.eta_hat();
        const auto& eta = c.frob().model.eta;
        for (int n = 0; n <= nm; ++n)
            for (int m = 0; m <= nm; ++m)
                for (int a = 0; a < N; ++a)
                    for (int b = 0; b < N; ++b)
                        r.add(e(c.idx(n, a), c.idx(m, b)) - Series::constant(ring, n == m ? eta[a][b] : ring->zero()));
        col.add("eta_hat_blocks", r, true, full, c.dim() * c.dim(), "eta^(T^n g_a, T^m g_b) = delta_mn eta_ab");
    }
    const char* ids[] = {"h_hat_hermitian", "chern_defining",    "chern_defining_conj", "D_hat_along_T",
                         "Cdag_routes",      "curvature_transport", "curvature_vanishing", "D_eta_transport",
                         "D_eta_hat"};
    if (!c.has_metric()) {
        for (auto id : ids) col.skip(id, kNeedsMetric);
        return;
    }
    const auto& h = *c.herm();
    SeriesMatrix H = c.h_hat();
    Residual herm;
    herm.add(H.transpose() - H.conjugate());
    col.add("h_hat_hermitian", herm, true, full, 1);

    std::vector<FrameVector> xs;
    for (int n = 0; n <= nm; ++n)
        for (int a = 0; a < N; ++a) xs.push_back(tf(c, n, a));
    const size_t nbasis = xs.size();
    for (int k = 0; k < 2; ++k) xs.push_back(random_vector(c, s, Frame::tframe, nm, false));
    Residual def, defc, cdag;
    for (const auto& x : xs) {
        SeriesMatrix G = c.Gamma_hat(x);
        def.add(c.apply(x, H) - G.transpose() * H);
        defc.add(c.apply(x.conj(), H) - H * G.conjugate());
        cdag.add(c.Cdag_hat(x.conj()) - c.Cdag_hat_definitional(x.conj()));
    }
    col.add("chern_defining", def, true, full, int(xs.size()), "X(h^) = Gamma^_X^T h^");
    col.add("chern_defining_conj", defc, true, full, int(xs.size()), "Xbar(h^) = h^ conj(Gamma^_X)");
    col.add("Cdag_routes", cdag, true, full, int(xs.size()), "closed form vs conj(h^-1 C^T h)");
    if (nm >= 1) {
        Residual dt;
        for (int k = 0; k < 4; ++k) dt.add(c.Gamma_hat(c.T(random_vector(c, s, Frame::coord, nm - 1, true))));
        col.add("D_hat_along_T", dt, true, full, 4, "Gamma^ vanishes along T(W)");
    } else {
        col.skip("D_hat_along_T", "needs n_max >= 1");
    }

    auto curv = lift_blocks2(c, [&](int a, int b) { return h.Curv[a][b]; });
    Residual ct, cv;
    for (size_t i = 0; i < nbasis; ++i)
        for (size_t j = 0; j < nbasis; ++j) {
            SeriesMatrix R = -c.apply(xs[j].conj(), c.Gamma_hat(xs[i]));
            bool primary = int(i) < N && int(j) < N;
            if (primary) ct.add(R - transport2(c, curv, xs[i], xs[j], true));
            else cv.add(R);
        }
    col.add("curvature_transport", ct, true, "n=0", N * N, "R^ = M conj(M) lift(R)");
    col.add("curvature_vanishing", cv, true, band(1, nm), int(nbasis * nbasis) - N * N, "zero once a descendant direction enters");

    std::vector<SeriesMatrix> compat;
    Residual small_compat;
    for (int a = 0; a < N; ++a) {
        compat.push_back(small::compat_block(c.frob(), h, a));
        small_compat.add(compat.back());
    }
    SeriesMatrix E = c.eta_hat();
    Residual tr, deh;
    for (const auto& x : xs) {
        SeriesMatrix G = c.Gamma_hat(x);
        SeriesMatrix De = c.apply(x, E) - (G.transpose() * E + E * G);
        tr.add(De - c.transport(compat, x));
        deh.add(De);
    }
    col.add("D_eta_transport", tr, true, full, int(xs.size()), "D^eta^ = M lift(D eta)");
    bool cond = small_vanishes(c, small_compat, col.tol);
    col.add("D_eta_hat", deh, cond, full, int(xs.size()),
            cond ? "small D eta = 0" : "small D eta != 0, informational");
}

// ---------------------------------------------------------------- saito_hat

void group_saito(const BigContext& c, Collector& col, Sampler& s) {
    const int N = c.N();
    const int nm = c.n_max();
    const auto& ring = c.ring();
    const auto& d = c.frob();
    const auto& sr = c.small_ring();
    const std::string full = band(0, nm);

    // small counterparts decide which lifted entries are asserted
    Residual s_flow, s_comm, s_sa, s_w;
    SeriesMatrix R0 = d.R0();
    for (int a = 0; a < N; ++a) {
        s_flow.add(R0.derivative(t0(a)) + d.C[a] - commutator(d.C[a], d.Rinf));
        s_comm.add(commutator(R0, d.C[a]));
    }
    s_sa.add(d.eta_adjoint(R0) - R0);
    Scalar w = d.model.euler.weight_d.to_mode(sr->mode());

    std::vector<FrameVector> xs;
    for (int n = 0; n <= nm; ++n)
        for (int a = 0; a < N; ++a) xs.push_back(tf(c, n, a));
    const size_t nbasis = xs.size();
    for (int k = 0; k < 2; ++k) xs.push_back(random_vector(c, s, Frame::tframe, nm, true));
    std::vector<SeriesMatrix> Cx;
    for (const auto& x : xs) Cx.push_back(c.C_hat(x));

    SeriesMatrix R0h = c.lift_endo(R0), Rinfh = c.lift_endo(d.Rinf), E = c.eta_hat();
    Residual etap, csa, flow, comm, rinf;
    for (size_t i = 0; i < xs.size(); ++i) {
        etap.add(c.apply(xs[i], E));
        csa.add(eta_adjoint_hat(c, Cx[i]) - Cx[i]);
        flow.add(c.apply(xs[i], R0h) + Cx[i] - commutator(Cx[i], Rinfh));
        comm.add(commutator(R0h, Cx[i]));
        rinf.add(c.apply(xs[i], Rinfh));
    }
    Residual dc00, dc0p, dcpq, cc;
    int n00 = 0, n0p = 0, npq = 0;
    for (size_t i = 0; i < xs.size(); ++i)
        for (size_t j = i + 1; j < xs.size(); ++j) {
            cc.add(commutator(Cx[i], Cx[j]));
            SeriesMatrix r = c.apply(xs[i], Cx[j]) - c.apply(xs[j], Cx[i]) - c.C_hat(c.bracket(xs[i], xs[j]));
            bool pi = int(i) < N, pj = int(j) < N;
            if (i >= nbasis || j >= nbasis || (pi != pj)) {
                dc0p.add(r);
                ++n0p;
            } else if (pi) {
                dc00.add(r);
                ++n00;
            } else {
                dcpq.add(r);
                ++npq;
            }
        }
    const int n = int(xs.size());
    col.add("eta_parallel", etap, true, full, n);
    col.add("CwedgeC", cc, true, full, n * (n - 1) / 2);
    col.add("dC[0,0]", dc00, true, "n=0", n00);
    col.add("dC[0,p]", dc0p, true, full, n0p);
    if (nm >= 1) col.add("dC[p,q]", dcpq, true, band(1, nm), npq);
    else col.skip("dC[p,q]", "needs n_max >= 1");
    col.add("C_selfadjoint", csa, true, full, n);
    bool cfl = small_vanishes(c, s_flow, col.tol), cc2 = small_vanishes(c, s_comm, col.tol), cs = small_vanishes(c, s_sa, col.tol);
    std::string sign = d.r0_sign > 0 ? "R0 = +C_E" : "R0 = -C_E";
    col.add("R0_flow", flow, cfl, full, n, sign + (cfl ? "" : "; small flow residual nonzero, informational"));
    col.add("R0_commute", comm, cc2, full, n, cc2 ? "" : "small residual nonzero, informational");
    Residual r0sa;
    r0sa.add(eta_adjoint_hat(c, R0h) - R0h);
    col.add("R0_selfadjoint", r0sa, cs, full, 1, cs ? "" : "small residual nonzero, informational");
    col.add("nabla_Rinf", rinf, true, full, n);
    Residual wt;
    wt.add(eta_adjoint_hat(c, Rinfh) + Rinfh + SeriesMatrix::identity(ring, c.dim()).scaled(w));
    col.add("weight", wt, false, full, 1, "Rinf^* + Rinf^ + w Id with w = weight_d; reported only");

    // flatness of nabla^ in coordinates, and the difference to nabla
    Residual flat, diff;
    std::vector<SeriesMatrix> om;
    for (int i = 0; i < c.dim(); ++i) om.push_back(c.nabla_hat_form(cf(c, i / N, i % N)));
    for (int i = 0; i < c.dim(); ++i)
        for (int j = i + 1; j < c.dim(); ++j) {
            FrameVector ei = cf(c, i / N, i % N), ej = cf(c, j / N, j % N);
            flat.add(c.apply(ei, om[j]) - c.apply(ej, om[i]) + commutator(om[i], om[j]));
        }
    col.add("nabla_flat", flat, true, full, c.dim() * (c.dim() - 1) / 2);
    for (int nn = 0; nn <= nm; ++nn)
        for (int a = 0; a < N; ++a)
            for (int m = 1; m <= nm; ++m)
                for (int b = 0; b < N; ++b) {
                    FrameVector col_v = c.to_coord(tf(c, m, b));
                    FrameVector lhs = c.apply(c.to_coord(tf(c, nn, a)), col_v);
                    FrameVector rhs = c.zero(Frame::coord);
                    if (nn == 0) {
                        rhs = c.quantum_product(cf(c, 0, a), cf(c, 0, b));
                        for (int k = 1; k < m; ++k) rhs = c.T(rhs);
                    }
                    // (nabla^ - nabla)_X V = -X(V) for nabla^-parallel V
                    for (int q = 0; q < c.dim(); ++q) diff.add(-lhs.c[q] - rhs.c[q]);
                }
    if (nm >= 1) col.add("nabla_difference", diff, true, full, (nm + 1) * nm * N * N, "(nabla^ - nabla)_{T^n g_a} T^m g_b = delta_n0 T^{m-1}(g_a o g_b)");
    else col.skip("nabla_difference", "needs n_max >= 1");
}

// ---------------------------------------------------------------- ttstar_hat

void group_ttstar(const BigContext& c, Collector& col, Sampler& s) {
    const char* ids[] = {"first_transport", "second_transport", "first", "holomorphic_C", "second", "Cdag_ImT"};
    if (!c.has_metric()) {
        for (auto id : ids) col.skip(id, kNeedsMetric);
        for (auto id : {"potential", "cv"}) col.skip(id, kNeedsMetric);
        return;
    }
    const int N = c.N();
    const int nm = c.n_max();
    const auto& d = c.frob();
    const auto& h = *c.herm();
    const std::string full = band(0, nm);

    Residual s_first, s_second;
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            if (a < b) s_first.add(small::first_tt_block(d, h, a, b));
            s_first.add(d.C[a].derivative(tb0(b)));
            s_second.add(small::second_tt_block(d, h, a, b));
        }
    auto first_blocks = lift_blocks2(c, [&](int a, int b) { return small::first_tt_block(d, h, a, b); });
    auto second_blocks = lift_blocks2(c, [&](int a, int b) { return small::second_tt_block(d, h, a, b); });

    std::vector<FrameVector> xs;
    for (int n = 0; n <= nm; ++n)
        for (int a = 0; a < N; ++a) xs.push_back(tf(c, n, a));
    std::vector<SeriesMatrix> Cx, Gx, Cd;
    for (const auto& x : xs) {
        Cx.push_back(c.C_hat(x));
        Gx.push_back(c.Gamma_hat(x));
        Cd.push_back(c.Cdag_hat(x.conj()));
    }
    auto D = [&](size_t i, const SeriesMatrix& phi) { return c.apply(xs[i], phi) + commutator(Gx[i], phi); };
    Residual ft, first, hol, st, second;
    for (size_t i = 0; i < xs.size(); ++i)
        for (size_t j = 0; j < xs.size(); ++j) {
            if (i < j) {
                SeriesMatrix r = D(i, Cx[j]) - D(j, Cx[i]) - c.C_hat(c.bracket(xs[i], xs[j]));
                ft.add(r - transport2(c, first_blocks, xs[i], xs[j], false));
                first.add(r);
            }
            hol.add(c.apply(xs[j].conj(), Cx[i]));
            SeriesMatrix R = -c.apply(xs[j].conj(), Gx[i]) + commutator(Cx[i], Cd[j]);
            st.add(R - transport2(c, second_blocks, xs[i], xs[j], true));
            second.add(R);
        }
    const int n = int(xs.size());
    col.add("first_transport", ft, true, full, n * (n - 1) / 2, "d^D^ C^ = M M lift(d^D C)");
    col.add("second_transport", st, true, full, n * n, "R^ + [C^, C^dag] = M conj(M) lift(R + [C, C^dag])");
    bool c1 = small_vanishes(c, s_first, col.tol), c2 = small_vanishes(c, s_second, col.tol);
    col.add("first", first, c1, full, n * (n - 1) / 2, c1 ? "small first tt* equation holds" : "small first tt* residual nonzero, informational");
    col.add("holomorphic_C", hol, c1, full, n * n);
    col.add("second", second, c2, full, n * n, c2 ? "small second tt* equation holds" : "small second tt* residual nonzero, informational");
    if (nm >= 1) {
        Residual imt;
        for (int k = 0; k < 4; ++k) imt.add(c.Cdag_hat_definitional(c.T(random_vector(c, s, Frame::coord, nm - 1, true)).conj()));
        col.add("Cdag_ImT", imt, true, full, 4, "C^dag vanishes along conj(T(W))");
    } else {
        col.skip("Cdag_ImT", "needs n_max >= 1");
    }

    auto small_of = [&](const std::vector<NamedResidual>& v, const std::string& id) {
        for (const auto& e : v)
            if (e.id == id) return e.residual;
        return Residual{};
    };
    auto small_list = small::tt_and_potential_residuals_small(d, h);
    if (d.model.A) {
        SeriesMatrix A = c.lift_endo(*d.model.A);
        SeriesMatrix Ad = h_adjoint_hat(c, A);
        SeriesMatrix R0 = c.lift_endo(d.R0()), Rinf = c.lift_endo(d.Rinf);
        std::vector<SeriesMatrix> dac;
        for (int a = 0; a < N; ++a) dac.push_back(small::cov_derivative(h, *d.model.A, a) - d.C[a]);
        Residual sa, tr, a3, b3, c3;
        sa.add(eta_adjoint_hat(c, A) - A);
        for (size_t i = 0; i < xs.size(); ++i) {
            SeriesMatrix r = D(i, A) - Cx[i];
            tr.add(r - c.transport(dac, xs[i]));
            a3.add(r);
            b3.add(Gx[i] + commutator(Ad, Cx[i]));
        }
        SeriesMatrix phi = Rinf + commutator(Ad, R0);
        c3.add(phi - h_adjoint_hat(c, phi));
        auto cond = [&](const std::string& id) { return small_vanishes(c, small_of(small_list, id), col.tol); };
        col.add("potential.DA_transport", tr, true, full, n, "D^A^ - C^ = M lift(DA - C)");
        col.add("potential.eta_selfadjoint", sa, cond("small.potential.eta_selfadjoint"), full, 1);
        col.add("potential.DA_eq_C", a3, cond("small.potential.DA_eq_C"), full, n);
        col.add("potential.D_eq_nabla_minus_AdagC", b3, cond("small.potential.D_eq_nabla_minus_AdagC"), full, n);
        col.add("potential.Rinf_selfadjoint", c3, cond("small.potential.Rinf_selfadjoint"), full, 1);
    } else {
        col.skip("potential", "needs potential_A");
    }
    if (d.model.cv) {
        const auto& U = d.model.cv->U;
        const auto& Q = d.model.cv->Q;
        SeriesMatrix Uh = c.lift_endo(U), Qh = c.lift_endo(Q);
        SeriesMatrix kUk = c.lift_endo(h.K * U.conjugate() * h.K.conjugate());
        Residual i1, du, dq, qh, qe;
        for (size_t i = 0; i < xs.size(); ++i) {
            i1.add(commutator(Cx[i], Uh));
            du.add(D(i, Uh) + commutator(Cx[i], Qh) - Cx[i]);
            dq.add(D(i, Qh) - commutator(Cx[i], kUk));
        }
        qh.add(Qh - h_adjoint_hat(c, Qh));
        qe.add(Qh + eta_adjoint_hat(c, Qh));
        auto cond = [&](const std::string& id) { return small_vanishes(c, small_of(small_list, id), col.tol); };
        col.add("cv.C_commutes_U", i1, cond("small.cv.C_commutes_U"), full, n);
        col.add("cv.DU", du, cond("small.cv.DU"), full, n);
        col.add("cv.DQ", dq, cond("small.cv.DQ"), full, n);
        col.add("cv.Q_h_selfadjoint", qh, cond("small.cv.Q_h_selfadjoint"), full, 1);
        col.add("cv.Q_eta_skew", qe, cond("small.cv.Q_eta_skew"), full, 1);
    } else {
        col.skip("cv", "needs cv data");
    }
}

// ---------------------------------------------------------------- lax

void group_lax(const BigContext& c, Collector& col) {
    const char* ids[] = {"small.lambda2", "small.lambda1", "small.lambda0", "small.lambda-1", "small.lambda-2", "small.curvature20",
                         "hat.lambda2",   "hat.lambda1",   "hat.lambda0",   "hat.lambda-1",   "hat.lambda-2",   "hat.curvature20"};
    if (!c.has_metric()) {
        for (auto id : ids) col.skip(id, kNeedsMetric);
        return;
    }
    const int N = c.N();
    const int nm = c.n_max();
    const auto& d = c.frob();
    const auto& h = *c.herm();

    // small: D - lambda C and Dbar - lambda^-1 Cdag
    Residual s[6];
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            if (a < b) {
                s[0].add(commutator(d.C[a], d.C[b]));
                s[1].add(small::first_tt_block(d, h, a, b));
                s[3].add(h.Cdag[b].derivative(tb0(a)) - h.Cdag[a].derivative(tb0(b)));
                s[4].add(commutator(h.Cdag[a], h.Cdag[b]));
                s[5].add(h.Gamma[b].derivative(t0(a)) - h.Gamma[a].derivative(t0(b)) + commutator(h.Gamma[a], h.Gamma[b]));
            }
            s[1].add(d.C[a].derivative(tb0(b)));
            s[2].add(small::second_tt_block(d, h, a, b));
            s[3].add(small::cov_derivative(h, h.Cdag[b], a));
        }
    const char* names[] = {"lambda2", "lambda1", "lambda0", "lambda-1", "lambda-2", "curvature20"};
    const char* notes[] = {"C wedge C", "d^D C and dbar C", "R + [C, Cdag]", "dbar Cdag and D Cdag", "Cdag wedge Cdag", "(2,0) curvature of D"};
    for (int k = 0; k < 6; ++k) col.add(std::string("small.") + names[k], s[k], false, "n=0", N * N, notes[k]);

    std::vector<FrameVector> xs;
    for (int n = 0; n <= nm; ++n)
        for (int a = 0; a < N; ++a) xs.push_back(tf(c, n, a));
    std::vector<SeriesMatrix> Cx, Gx, Cd;
    for (const auto& x : xs) {
        Cx.push_back(c.C_hat(x));
        Gx.push_back(c.Gamma_hat(x));
        Cd.push_back(c.Cdag_hat(x.conj()));
    }
    Residual r[6];
    for (size_t i = 0; i < xs.size(); ++i)
        for (size_t j = 0; j < xs.size(); ++j) {
            if (i < j) {
                FrameVector br = c.bracket(xs[i], xs[j]);
                r[0].add(commutator(Cx[i], Cx[j]));
                r[1].add(c.apply(xs[i], Cx[j]) + commutator(Gx[i], Cx[j]) - c.apply(xs[j], Cx[i]) - commutator(Gx[j], Cx[i]) -
                         c.C_hat(br));
                r[3].add(c.apply(xs[i].conj(), Cd[j]) - c.apply(xs[j].conj(), Cd[i]) - c.Cdag_hat(br.conj()));
                r[4].add(commutator(Cd[i], Cd[j]));
                r[5].add(c.apply(xs[i], Gx[j]) - c.apply(xs[j], Gx[i]) + commutator(Gx[i], Gx[j]) - c.Gamma_hat(br));
            }
            r[1].add(c.apply(xs[j].conj(), Cx[i]));
            r[2].add(-c.apply(xs[j].conj(), Gx[i]) + commutator(Cx[i], Cd[j]));
            r[3].add(c.apply(xs[i], Cd[j]) + commutator(Gx[i], Cd[j]));
        }
    for (int k = 0; k < 6; ++k) {
        bool cond = k == 0 || small_vanishes(c, s[k], col.tol);
        col.add(std::string("hat.") + names[k], r[k], cond, band(0, nm), int(xs.size() * xs.size()),
                std::string(notes[k]) + (cond ? "" : "; small counterpart nonzero, informational"));
    }
}

}  // namespace

std::vector<Entry> run_checks(const BigContext& ctx, const Options& opt) {
    std::vector<std::string> groups = opt.groups.empty() ? check_groups() : opt.groups;
    std::vector<std::function<std::vector<Entry>()>> jobs;
    for (const auto& g : groups) {
        size_t salt = 0;
        for (size_t i = 0; i < check_groups().size(); ++i)
            if (check_groups()[i] == g) salt = i + 1;
        if (salt == 0) throw std::invalid_argument("unknown check group '" + g + "'");
        jobs.push_back([&ctx, &opt, g, salt]() {
            Collector col{g, opt.seed, ctx.ring()->mode(), opt.tolerance, {}};
            Sampler s(opt.seed, salt);
            if (g == "model") group_model(ctx, col);
            else if (g == "lift") group_lift(ctx, col, s);
            else if (g == "frame") group_frame(ctx, col, s);
            else if (g == "aux") group_aux(ctx, col, s);
            else if (g == "metric") group_metric(ctx, col, s);
            else if (g == "saito_hat") group_saito(ctx, col, s);
            else if (g == "ttstar_hat") group_ttstar(ctx, col, s);
            else group_lax(ctx, col);
            return col.out;
        });
    }
    std::vector<std::vector<Entry>> results(jobs.size());
    if (opt.parallel && std::thread::hardware_concurrency() > 1) {
        std::vector<std::future<std::vector<Entry>>> fut;
        for (auto& j : jobs) fut.push_back(std::async(std::launch::async, j));
        for (size_t i = 0; i < fut.size(); ++i) results[i] = fut[i].get();
    } else {
        for (size_t i = 0; i < jobs.size(); ++i) results[i] = jobs[i]();
    }
    std::vector<Entry> out;
    for (auto& r : results) out.insert(out.end(), r.begin(), r.end());
    return out;
}

bool all_pass(const std::vector<Entry>& entries) {
    for (const auto& e : entries)
        if (e.asserted && e.status == Status::fail) return false;
    return true;
}

nlohmann::ordered_json entries_json(const std::vector<Entry>& entries) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
        nlohmann::ordered_json j;
        j["id"] = e.id;
        j["group"] = e.group;
        j["status"] = status_name(e.status);
        j["asserted"] = e.asserted;
        j["max_residual"] = e.max_residual;
        j["degree_window"] = e.window;
        j["level_band"] = e.level_band;
        j["samples"] = e.samples;
        j["seed"] = e.seed;
        j["note"] = e.note;
        a.push_back(j);
    }
    return a;
}

std::string table(const std::vector<Entry>& entries) {
    std::ostringstream os;
    char buf[512];
    std::snprintf(buf, sizeof buf, "%-46s %-8s %-4s %-12s %-6s %-10s\n", "id", "status", "asrt", "max_resid", "window", "levels");
    os << buf;
    for (const auto& e : entries) {
        std::snprintf(buf, sizeof buf, "%-46s %-8s %-4s %-12.3g %-6d %-10s\n", e.id.c_str(), status_name(e.status).c_str(),
                      e.asserted ? "yes" : "no", e.max_residual, e.window, e.level_band.c_str());
        os << buf;
    }
    std::snprintf(buf, sizeof buf, "overall: %s\n", all_pass(entries) ? "PASS" : "FAIL");
    os << buf;
    return os.str();
}

}  // namespace ttlift::verify
