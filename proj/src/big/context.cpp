#include "big/context.hpp"

#include <algorithm>
#include <array>

namespace ttlift::big {

using small::t0;
using small::tb0;

FrameVector FrameVector::conj() const {
    FrameVector r = *this;
    r.sector = sector == Sector::hol ? Sector::antihol : Sector::hol;
    for (auto& s : r.c) s = s.conjugate();
    return r;
}

static void check_same(const FrameVector& a, const FrameVector& b) {
    if (a.frame != b.frame || a.sector != b.sector || a.c.size() != b.c.size())
        throw ContextError("frame vectors of different frame or sector");
}

FrameVector FrameVector::operator+(const FrameVector& o) const {
    check_same(*this, o);
    FrameVector r = *this;
    for (size_t i = 0; i < c.size(); ++i) r.c[i] = c[i] + o.c[i];
    return r;
}

FrameVector FrameVector::operator-(const FrameVector& o) const {
    check_same(*this, o);
    FrameVector r = *this;
    for (size_t i = 0; i < c.size(); ++i) r.c[i] = c[i] - o.c[i];
    return r;
}

FrameVector FrameVector::scaled(const Series& s) const {
    FrameVector r = *this;
    for (auto& x : r.c)
        if (!x.is_zero()) x = x * s;
        else x = x.truncated(std::min(x.valid_degree(), s.valid_degree()));
    return r;
}

bool FrameVector::is_zero() const {
    for (const auto& x : c)
        if (!x.is_zero()) return false;
    return true;
}

int FrameVector::top_level(int N) const {
    for (int i = int(c.size()) - 1; i >= 0; --i)
        if (!c[i].is_zero()) return i / N;
    return -1;
}

BigContext::BigContext(const FrobeniusModel& model, Truncation trunc, Normalization norm)
    : trunc_(trunc), norm_(norm), N_(model.N), K_(model.N * (trunc.n_max + 1)) {
    small::validate_model(model);
    if (trunc.n_max < 0 || trunc.d_max < 1) throw TruncationError("truncation must be positive");
    if (trunc.i_max < trunc.n_max) throw TruncationError("i_max must be at least n_max");
    frob_ = small::structure_constants(model);
    auto wd = small::wdvv_residual(frob_);
    if (!wd.vanishes(model.ring->mode(), 1e-9)) throw small::InvalidModel("WDVV residual is nonzero");
    Residual unit;
    unit.add(frob_.C[model.unit] - SeriesMatrix::identity(model.ring, N_));
    if (!unit.vanishes(model.ring->mode(), 1e-9)) throw small::InvalidModel("unit axiom fails: C_unit != Id");
    if (model.real) herm_ = small::hermitian_from_k(frob_, *model.real);
    flats_ = small::deformed_flats(frob_, trunc.i_max);
    big_ = make_ring(N_, trunc.n_max, trunc.d_max, model.ring->mode());
    build_u();
    build_lifts();
    build_frame();
}

std::unique_ptr<Substitution> BigContext::make_lift_sub(const std::vector<Series>& up) const {
    auto sub = std::make_unique<Substitution>(big_);
    for (int s = 0; s < N_; ++s) {
        sub->set(t0(s), up[s]);
        sub->set(tb0(s), up[s].conjugate());
    }
    return sub;
}

void BigContext::build_u() {
    const auto& eta = frob_.model.eta;
    const auto& etainv = frob_.eta_inv;
    std::vector<Series> base(N_, Series(big_));
    for (int a = 0; a < N_; ++a)
        for (int g = 0; g < N_; ++g)
            if (!eta[a][g].is_zero()) base[a] += Series::variable(big_, t0(g)).scaled(eta[a][g]);
    auto raise = [&](const std::vector<Series>& low) {
        std::vector<Series> up(N_, Series(big_));
        for (int s = 0; s < N_; ++s)
            for (int a = 0; a < N_; ++a)
                if (!etainv[s][a].is_zero()) up[s] += low[a].scaled(etainv[s][a]);
        return up;
    };
    std::vector<Series> low = base;
    bool done = false;
    for (int it = 1; it <= trunc_.d_max + 2; ++it) {
        auto sub = make_lift_sub(raise(low));
        std::vector<Series> next = base;
        for (int a = 0; a < N_; ++a)
            for (int i = 0; i + 1 <= trunc_.n_max; ++i)
                for (int b = 0; b < N_; ++b) {
                    const Series& r = flats_.R[a][b][i];
                    if (r.is_zero()) continue;
                    next[a] += Series::variable(big_, {Sector::hol, i + 1, b}) * sub->apply(r);
                }
        bool same = true;
        for (int a = 0; a < N_; ++a) same = same && (next[a] - low[a]).is_zero();
        low = std::move(next);
        iterations_ = it;
        if (same) {
            done = true;
            break;
        }
    }
    if (!done) throw std::logic_error("u fixed point did not stabilise");
    ul_ = low;
    u_ = raise(low);
    ubar_.clear();
    for (auto& s : u_) ubar_.push_back(s.conjugate());
    M_ = SeriesMatrix(big_, N_, N_);
    for (int s = 0; s < N_; ++s)
        for (int a = 0; a < N_; ++a) M_(s, a) = u_[s].derivative(t0(a));
    lift_sub_ = make_lift_sub(u_);
}

Series BigContext::lift(const Series& f) const {
    const Series* src = &f;
    Series moved;
    if (!(*f.ring() == *small_ring())) {
        if (!f.depends_only_on_level0()) throw DomainError("lift needs a function of level-0 variables");
        moved = f.transfer(make_ring(N_, 0, f.ring()->d_max(), f.ring()->mode()));
        src = &moved;
    }
    return lift_sub_->apply(*src);
}

SeriesMatrix BigContext::lift(const SeriesMatrix& f) const {
    SeriesMatrix r(big_, f.rows(), f.cols());
    for (int i = 0; i < f.rows(); ++i)
        for (int j = 0; j < f.cols(); ++j)
            if (!f(i, j).is_zero()) r(i, j) = lift(f(i, j));
    return r;
}

Series BigContext::dw_rescaled(const Series& f) const {
    Substitution sub(big_);
    for (int sec = 0; sec < 2; ++sec)
        for (int k = 2; k <= trunc_.n_max; ++k) {
            mpz_class fact = 1;
            for (int j = 2; j <= k; ++j) fact *= j;
            for (int a = 0; a < N_; ++a) {
                VarId v{Sector(sec), k, a};
                sub.set(v, Series::variable(big_, v).scaled(big_->rational(mpq_class(fact))));
            }
        }
    return sub.apply(f);
}

std::vector<Series> BigContext::dw_rescaled(const std::vector<Series>& f) const {
    std::vector<Series> out;
    for (const auto& s : f) out.push_back(dw_rescaled(s));
    return out;
}

void BigContext::build_lifts() {
    const auto& sr = small_ring();
    liftR_.assign(N_, std::vector<std::vector<Series>>(N_, std::vector<Series>(trunc_.i_max + 1)));
    for (int a = 0; a < N_; ++a)
        for (int b = 0; b < N_; ++b)
            for (int i = 0; i <= trunc_.i_max; ++i) liftR_[a][b][i] = lift(flats_.R[a][b][i]);
    liftCl_.assign(N_, std::vector<std::vector<Series>>(N_, std::vector<Series>(N_)));
    for (int a = 0; a < N_; ++a)
        for (int b = 0; b < N_; ++b)
            for (int s = 0; s < N_; ++s) {
                Series low(sr);
                for (int mu = 0; mu < N_; ++mu)
                    if (!frob_.model.eta[s][mu].is_zero()) low += frob_.C[a](mu, b).scaled(frob_.model.eta[s][mu]);
                liftCl_[a][b][s] = lift(low);
            }
    liftC_.clear();
    for (int s = 0; s < N_; ++s) liftC_.push_back(lift(frob_.C[s]));
    auto transported = [&](const std::vector<SeriesMatrix>& lifted, bool conj) {
        std::vector<SeriesMatrix> out;
        for (int a = 0; a < N_; ++a) {
            SeriesMatrix acc(big_, N_, N_);
            for (int s = 0; s < N_; ++s) {
                const Series& m = M_(s, a);
                if (m.is_zero()) continue;
                acc += lifted[s].scaled(conj ? m.conjugate() : m);
            }
            out.push_back(acc);
        }
        return out;
    };
    ChatBlock_ = transported(liftC_, false);
    if (herm_) {
        liftGamma_.clear();
        liftCdag_.clear();
        for (int s = 0; s < N_; ++s) {
            liftGamma_.push_back(lift(herm_->Gamma[s]));
            liftCdag_.push_back(lift(herm_->Cdag[s]));
        }
        liftCurv_.assign(N_, std::vector<SeriesMatrix>(N_));
        for (int s = 0; s < N_; ++s)
            for (int n = 0; n < N_; ++n) liftCurv_[s][n] = lift(herm_->Curv[s][n]);
        liftH_ = lift(herm_->H);
        liftHinvBig_ = liftH_.inverse();
        GammaBlock_ = transported(liftGamma_, false);
        CdagBlock_ = transported(liftCdag_, true);
    }
}

void BigContext::build_frame() {
    const auto& etainv = frob_.eta_inv;
    Tcol_.assign(N_ * trunc_.n_max, zero(Frame::coord));
    for (int m = 0; m < trunc_.n_max; ++m)
        for (int b = 0; b < N_; ++b) {
            FrameVector v = zero(Frame::coord);
            v.c[idx(m + 1, b)] = Series::integer(big_, 1);
            for (int mu = 0; mu < N_; ++mu)
                for (int s = 0; s < N_; ++s)
                    if (!etainv[mu][s].is_zero()) v.c[idx(0, mu)] -= liftR_[s][b][m].scaled(etainv[mu][s]);
            Tcol_[idx(m, b)] = v;
        }
    P_ = SeriesMatrix(big_, K_, K_);
    for (int a = 0; a < N_; ++a) P_(idx(0, a), idx(0, a)) = Series::integer(big_, 1);
    for (int n = 0; n < trunc_.n_max; ++n)
        for (int a = 0; a < N_; ++a) {
            FrameVector col = zero(Frame::coord);
            for (int i = 0; i < K_; ++i) col.c[i] = P_(i, idx(n, a));
            FrameVector next = T(col);
            for (int i = 0; i < K_; ++i) P_(i, idx(n + 1, a)) = next.c[i];
        }
    primProd_.assign(N_, std::vector<Series>(N_ * N_, Series(big_)));
    for (int a = 0; a < N_; ++a)
        for (int b = 0; b < N_; ++b) {
            FrameVector q = quantum_product(basis(Frame::coord, 0, a), basis(Frame::coord, 0, b));
            for (int s = 0; s < N_; ++s) primProd_[a][b * N_ + s] = q.c[idx(0, s)];
        }
    SeriesMatrix nil = SeriesMatrix::identity(big_, K_) - P_;
    SeriesMatrix term = SeriesMatrix::identity(big_, K_);
    Pinv_ = term;
    for (int k = 1; k <= trunc_.n_max; ++k) {
        term = term * nil;
        Pinv_ += term;
    }
}

FrameVector BigContext::zero(Frame f, Sector s) const {
    FrameVector v;
    v.frame = f;
    v.sector = s;
    v.c.assign(K_, Series(big_));
    return v;
}

FrameVector BigContext::basis(Frame f, int level, int flavor, Sector s) const {
    if (level < 0 || level > trunc_.n_max) throw TruncationError("basis level outside the truncation");
    FrameVector v = zero(f, s);
    v.c[idx(level, flavor)] = Series::integer(big_, 1);
    return v;
}

FrameVector BigContext::matvec(const SeriesMatrix& m, const FrameVector& v) const {
    FrameVector r = v;
    for (int i = 0; i < K_; ++i) {
        Series acc(big_);
        for (int j = 0; j < K_; ++j)
            if (!m(i, j).is_zero() && !v.c[j].is_zero()) acc += m(i, j) * v.c[j];
        r.c[i] = acc;
    }
    return r;
}

FrameVector BigContext::to_coord(const FrameVector& v) const {
    if (v.frame == Frame::coord) return v;
    FrameVector r = matvec(v.sector == Sector::hol ? P_ : P_.conjugate(), v);
    r.frame = Frame::coord;
    return r;
}

FrameVector BigContext::to_tframe(const FrameVector& v) const {
    if (v.frame == Frame::tframe) return v;
    FrameVector r = matvec(v.sector == Sector::hol ? Pinv_ : Pinv_.conjugate(), v);
    r.frame = Frame::tframe;
    return r;
}

FrameVector BigContext::T(const FrameVector& w0) const {
    if (w0.sector != Sector::hol) throw ContextError("T acts on holomorphic fields");
    FrameVector w = to_coord(w0);
    if (w.top_level(N_) >= trunc_.n_max) throw TruncationError("T needs level headroom");
    FrameVector r = zero(Frame::coord);
    for (int i = 0; i < N_ * trunc_.n_max; ++i)
        if (!w.c[i].is_zero()) r = r + Tcol_[i].scaled(w.c[i]);
    return r;
}

FrameVector BigContext::tau_plus(const FrameVector& w0) const {
    FrameVector w = to_coord(w0);
    if (w.top_level(N_) >= trunc_.n_max) throw TruncationError("tau_+ needs level headroom");
    FrameVector r = zero(Frame::coord, w.sector);
    for (int i = 0; i + N_ < K_; ++i) r.c[i + N_] = w.c[i];
    return r;
}

FrameVector BigContext::tau_minus(const FrameVector& w0) const {
    FrameVector w = to_coord(w0);
    FrameVector r = zero(Frame::coord, w.sector);
    for (int i = N_; i < K_; ++i) r.c[i - N_] = w.c[i];
    return r;
}

FrameVector BigContext::string_field() const {
    FrameVector s = zero(Frame::coord);
    for (int n = 0; n < trunc_.n_max; ++n)
        for (int a = 0; a < N_; ++a) s.c[idx(n, a)] = -Series::variable(big_, {Sector::hol, n + 1, a});
    s.c[idx(0, frob_.model.unit)] += Series::integer(big_, 1);
    return s;
}

FrameVector BigContext::T_definitional(const FrameVector& w) const {
    FrameVector tp = tau_plus(w);
    return tp - quantum_product(string_field(), tp);
}

Series BigContext::apply(const FrameVector& x0, const Series& f) const {
    FrameVector x = to_coord(x0);
    Series acc(big_);
    for (int i = 0; i < K_; ++i) {
        if (x.c[i].is_zero()) continue;
        VarId v{x.sector, i / N_, i % N_};
        acc += x.c[i] * f.derivative(v);
    }
    return acc;
}

SeriesMatrix BigContext::apply(const FrameVector& x0, const SeriesMatrix& f) const {
    FrameVector x = to_coord(x0);
    SeriesMatrix r(big_, f.rows(), f.cols());
    for (int i = 0; i < f.rows(); ++i)
        for (int j = 0; j < f.cols(); ++j)
            if (!f(i, j).is_zero()) r(i, j) = apply(x, f(i, j));
    return r;
}

FrameVector BigContext::apply(const FrameVector& x, const FrameVector& v) const {
    FrameVector r = v;
    FrameVector xc = to_coord(x);
    for (auto& s : r.c)
        if (!s.is_zero()) s = apply(xc, s);
    return r;
}

FrameVector BigContext::bracket(const FrameVector& x0, const FrameVector& y0) const {
    FrameVector x = to_coord(x0), y = to_coord(y0);
    if (x.sector != Sector::hol || y.sector != Sector::hol) throw ContextError("bracket of holomorphic fields only");
    return apply(x, y) - apply(y, x);
}

SeriesMatrix BigContext::blockdiag(const SeriesMatrix& block) const {
    SeriesMatrix r(big_, K_, K_);
    for (int n = 0; n <= trunc_.n_max; ++n)
        for (int a = 0; a < N_; ++a)
            for (int b = 0; b < N_; ++b) r(idx(n, a), idx(n, b)) = block(a, b);
    return r;
}

SeriesMatrix BigContext::eta_hat() const { return blockdiag(SeriesMatrix::constant(big_, frob_.model.eta)); }

SeriesMatrix BigContext::h_hat() const {
    if (!herm_) throw ContextError("no real structure");
    return blockdiag(liftH_);
}

SeriesMatrix BigContext::h_hat_inverse() const {
    if (!herm_) throw ContextError("no real structure");
    return blockdiag(liftHinvBig_);
}

namespace {

SeriesMatrix level0_combination(const RingPtr& ring, int N, const FrameVector& x, const std::vector<SeriesMatrix>& blocks) {
    SeriesMatrix acc(ring, N, N);
    for (int a = 0; a < N; ++a)
        if (!x.c[a].is_zero()) acc += blocks[a].scaled(x.c[a]);
    return acc;
}

}  // namespace

SeriesMatrix BigContext::C_hat(const FrameVector& x) const {
    if (x.sector != Sector::hol) throw ContextError("C_hat takes a holomorphic direction");
    return blockdiag(level0_combination(big_, N_, to_tframe(x), ChatBlock_));
}

SeriesMatrix BigContext::Gamma_hat(const FrameVector& x) const {
    if (!herm_) throw ContextError("no real structure");
    if (x.sector != Sector::hol) return SeriesMatrix(big_, K_, K_);
    return blockdiag(level0_combination(big_, N_, to_tframe(x), GammaBlock_));
}

SeriesMatrix BigContext::Cdag_hat(const FrameVector& ybar) const {
    if (!herm_) throw ContextError("no real structure");
    if (ybar.sector != Sector::antihol) throw ContextError("C_dagger takes an antiholomorphic direction");
    return blockdiag(level0_combination(big_, N_, to_tframe(ybar), CdagBlock_));
}

SeriesMatrix BigContext::Cdag_hat_definitional(const FrameVector& ybar) const {
    SeriesMatrix c = C_hat(ybar.conj());
    return (h_hat_inverse() * c.transpose() * h_hat()).conjugate();
}

SeriesMatrix BigContext::transport(const std::vector<SeriesMatrix>& blocks, const FrameVector& x) const {
    std::vector<SeriesMatrix> lifted;
    for (const auto& b : blocks) lifted.push_back(lift(b));
    std::vector<SeriesMatrix> per_alpha;
    for (int a = 0; a < N_; ++a) {
        SeriesMatrix acc(big_, N_, N_);
        for (int s = 0; s < N_; ++s)
            if (!M_(s, a).is_zero()) acc += lifted[s].scaled(M_(s, a));
        per_alpha.push_back(acc);
    }
    return blockdiag(level0_combination(big_, N_, to_tframe(x), per_alpha));
}

SeriesMatrix BigContext::transport_conj(const std::vector<SeriesMatrix>& blocks, const FrameVector& ybar) const {
    std::vector<SeriesMatrix> lifted;
    for (const auto& b : blocks) lifted.push_back(lift(b));
    std::vector<SeriesMatrix> per_beta;
    for (int b = 0; b < N_; ++b) {
        SeriesMatrix acc(big_, N_, N_);
        for (int s = 0; s < N_; ++s)
            if (!M_(s, b).is_zero()) acc += lifted[s].scaled(M_(s, b).conjugate());
        per_beta.push_back(acc);
    }
    return blockdiag(level0_combination(big_, N_, to_tframe(ybar), per_beta));
}

SeriesMatrix BigContext::D_hat(const FrameVector& x, const SeriesMatrix& phi) const {
    SeriesMatrix d = apply(x, phi);
    if (x.sector == Sector::hol) d += commutator(Gamma_hat(x), phi);
    return d;
}

const Series& BigContext::two_point(int i, int beta, int alpha) const {
    if (i < 0 || i > trunc_.i_max) throw TruncationError("two-point level outside i_max");
    return liftR_[alpha][beta][i];
}

Series BigContext::three_point(int m, int a, int n, int b, int p, int c) const {
    std::array<std::pair<int, int>, 3> s{{{m, a}, {n, b}, {p, c}}};
    std::sort(s.begin(), s.end(), std::greater<>());
    auto key = std::make_tuple(s[0].first, s[0].second, s[1].first, s[1].second, s[2].first, s[2].second);
    {
        std::lock_guard<std::mutex> lk(memo_mu_);
        auto it = memo3_.find(key);
        if (it != memo3_.end()) return it->second;
    }
    Series r(big_);
    if (s[0].first == 0) {
        for (int sg = 0; sg < N_; ++sg) {
            const Series& cl = liftCl_[s[0].second][s[1].second][sg];
            if (!cl.is_zero()) r += cl * M_(sg, s[2].second);
        }
    } else {
        int lev = s[0].first - 1;
        if (lev > trunc_.i_max) throw TruncationError("three-point level outside i_max");
        for (int mu = 0; mu < N_; ++mu) {
            const Series& rr = liftR_[mu][s[0].second][lev];
            if (rr.is_zero()) continue;
            for (int nu = 0; nu < N_; ++nu) {
                const Scalar& e = frob_.eta_inv[mu][nu];
                if (e.is_zero()) continue;
                r += (rr * three_point(0, nu, s[1].first, s[1].second, s[2].first, s[2].second)).scaled(e);
            }
        }
    }
    std::lock_guard<std::mutex> lk(memo_mu_);
    memo3_.emplace(key, r);
    return r;
}

Series BigContext::three_point_derivative(int m, int a, int n, int b, int sigma) const {
    if (m > trunc_.i_max) throw TruncationError("three-point level outside i_max");
    if (n > trunc_.n_max) throw TruncationError("derivative variable outside n_max");
    return liftR_[sigma][a][m].derivative(VarId{Sector::hol, n, b});
}

Series BigContext::correlator3(const FrameVector& x0, const FrameVector& y0, const FrameVector& z0, Route route) const {
    FrameVector x = to_coord(x0), y = to_coord(y0), z = to_coord(z0);
    if (x.sector != Sector::hol || y.sector != Sector::hol || z.sector != Sector::hol)
        throw ContextError("correlators take holomorphic fields");
    if (route == Route::derivative && z.top_level(N_) > 0)
        throw ContextError("derivative route needs a primary third slot");
    Series acc(big_);
    for (int i = 0; i < K_; ++i) {
        if (x.c[i].is_zero()) continue;
        for (int j = 0; j < K_; ++j) {
            if (y.c[j].is_zero()) continue;
            Series xy = x.c[i] * y.c[j];
            for (int l = 0; l < K_; ++l) {
                if (z.c[l].is_zero()) continue;
                Series v = route == Route::trr
                               ? three_point(i / N_, i % N_, j / N_, j % N_, l / N_, l % N_)
                               : three_point_derivative(i / N_, i % N_, j / N_, j % N_, l);
                if (!v.is_zero()) acc += xy * z.c[l] * v;
            }
        }
    }
    return acc;
}

FrameVector BigContext::quantum_product(const FrameVector& w1, const FrameVector& w2, Route route) const {
    std::vector<Series> low;
    for (int mu = 0; mu < N_; ++mu) low.push_back(correlator3(w1, w2, basis(Frame::coord, 0, mu), route));
    FrameVector r = zero(Frame::coord);
    for (int s = 0; s < N_; ++s)
        for (int mu = 0; mu < N_; ++mu)
            if (!frob_.eta_inv[s][mu].is_zero()) r.c[idx(0, s)] += low[mu].scaled(frob_.eta_inv[s][mu]);
    return r;
}

FrameVector BigContext::diamond(const FrameVector& x0, const FrameVector& y0) const {
    FrameVector x = to_tframe(x0), y = to_tframe(y0);
    FrameVector r = zero(Frame::tframe);
    for (int n = 0; n <= trunc_.n_max; ++n)
        for (int a = 0; a < N_; ++a) {
            if (x.c[idx(n, a)].is_zero()) continue;
            for (int b = 0; b < N_; ++b) {
                if (y.c[idx(n, b)].is_zero()) continue;
                Series xy = x.c[idx(n, a)] * y.c[idx(n, b)];
                for (int s = 0; s < N_; ++s)
                    if (!primProd_[a][b * N_ + s].is_zero()) r.c[idx(n, s)] += xy * primProd_[a][b * N_ + s];
            }
        }
    return r;
}

FrameVector BigContext::s_hat() const {
    FrameVector s = string_field();
    FrameVector ss = quantum_product(s, s);
    FrameVector r = zero(Frame::tframe);
    for (int n = 0; n <= trunc_.n_max; ++n)
        for (int a = 0; a < N_; ++a) r.c[idx(n, a)] = ss.c[idx(0, a)];
    return r;
}

Series BigContext::degenerate_pairing(const FrameVector& u, const FrameVector& v) const {
    return correlator3(string_field(), u, v);
}

Series BigContext::eta_hat_correlator(const FrameVector& w, const FrameVector& v) const {
    FrameVector a = to_coord(w), b = to_coord(v);
    FrameVector s = string_field();
    Series acc = correlator3(s, a, b);
    for (int k = 1; k <= trunc_.n_max; ++k) {
        a = tau_minus(a);
        b = tau_minus(b);
        acc += correlator3(s, a, b);
    }
    return acc;
}

SeriesMatrix BigContext::nabla_hat_form(const FrameVector& x) const { return -(apply(x, P_) * Pinv_); }

}  // namespace ttlift::big
