#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <tuple>

#include "small/model.hpp"

namespace ttlift::big {

using small::FrobeniusData;
using small::FrobeniusModel;

struct Truncation {
    int n_max = 2;
    int d_max = 6;
    int i_max = 2;
};

enum class Normalization { liu, dw_rescaled };

class TruncationError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Frame { coord, tframe };

/// Vector field on the truncated big phase space. Component index is
/// level * N + flavor. An antiholomorphic field sum y_I conj(e_I) acts by
/// derivatives in the conjugate variables.
struct FrameVector {
    Frame frame = Frame::coord;
    Sector sector = Sector::hol;
    std::vector<Series> c;

    FrameVector conj() const;
    FrameVector operator+(const FrameVector& o) const;
    FrameVector operator-(const FrameVector& o) const;
    FrameVector scaled(const Series& s) const;
    bool is_zero() const;
    int top_level(int N) const;  // highest level with a nonzero component, -1 if zero
};

enum class Route { trr, derivative };

/// Truncated big phase space built from a small model. Immutable after
/// construction except for internal memo tables guarded by a mutex.
class BigContext {
public:
    BigContext(const FrobeniusModel& model, Truncation trunc, Normalization norm = Normalization::liu);

    const FrobeniusData& frob() const { return frob_; }
    const std::optional<small::HermitianData>& herm() const { return herm_; }
    const small::DeformedFlats& flats() const { return flats_; }
    const RingPtr& ring() const { return big_; }
    const RingPtr& small_ring() const { return frob_.model.ring; }
    int N() const { return N_; }
    int n_max() const { return trunc_.n_max; }
    int d_max() const { return trunc_.d_max; }
    int i_max() const { return trunc_.i_max; }
    int dim() const { return K_; }
    int idx(int level, int flavor) const { return level * N_ + flavor; }
    Normalization normalization() const { return norm_; }

    // natural lifts
    Series lift(const Series& f) const;
    SeriesMatrix lift(const SeriesMatrix& f) const;

    const std::vector<Series>& u() const { return u_; }        // upper index
    const std::vector<Series>& u_lower() const { return ul_; }
    const std::vector<Series>& ubar() const { return ubar_; }
    const SeriesMatrix& M() const { return M_; }  // M(sigma, alpha) = du^sigma/dt^alpha_0
    int fixed_point_iterations() const { return iterations_; }

    // u and M in the rescaled coordinates t_k = k! s_k
    std::vector<Series> dw_rescaled(const std::vector<Series>& f) const;
    Series dw_rescaled(const Series& f) const;

    // frames
    const SeriesMatrix& P() const { return P_; }        // column J = coordinate expression of T-frame vector J
    const SeriesMatrix& Pinv() const { return Pinv_; }
    FrameVector basis(Frame f, int level, int flavor, Sector s = Sector::hol) const;
    FrameVector zero(Frame f, Sector s = Sector::hol) const;
    FrameVector to_coord(const FrameVector& v) const;
    FrameVector to_tframe(const FrameVector& v) const;
    FrameVector T(const FrameVector& w) const;  // closed form, coordinate frame in and out
    FrameVector T_definitional(const FrameVector& w) const;  // tau_+ - S o tau_+
    FrameVector tau_plus(const FrameVector& w) const;
    FrameVector tau_minus(const FrameVector& w) const;
    FrameVector string_field() const;
    Series apply(const FrameVector& x, const Series& f) const;
    SeriesMatrix apply(const FrameVector& x, const SeriesMatrix& f) const;
    FrameVector apply(const FrameVector& x, const FrameVector& v) const;  // componentwise, same frame as v
    FrameVector bracket(const FrameVector& x, const FrameVector& y) const;  // coordinate frame
    FrameVector matvec(const SeriesMatrix& m, const FrameVector& v) const;

    // correlators
    const Series& two_point(int i, int beta, int alpha) const;  // <<tau_{i,beta} gamma_alpha>>
    Series three_point(int m, int a, int n, int b, int p, int c) const;  // TRR route, memoized
    Series three_point_derivative(int m, int a, int n, int b, int sigma) const;
    Series correlator3(const FrameVector& x, const FrameVector& y, const FrameVector& z, Route r = Route::trr) const;
    FrameVector quantum_product(const FrameVector& w1, const FrameVector& w2, Route r = Route::trr) const;

    // auxiliary products (T-frame vectors)
    FrameVector diamond(const FrameVector& x, const FrameVector& y) const;
    FrameVector s_hat() const;
    Series degenerate_pairing(const FrameVector& u, const FrameVector& v) const;
    Series eta_hat_correlator(const FrameVector& w, const FrameVector& v) const;

    // lifted tensors in the T-frame (K x K)
    SeriesMatrix blockdiag(const SeriesMatrix& block) const;
    SeriesMatrix eta_hat() const;
    SeriesMatrix h_hat() const;
    SeriesMatrix h_hat_inverse() const;  // inverse computed in the big ring
    SeriesMatrix lift_endo(const SeriesMatrix& small_endo) const { return blockdiag(lift(small_endo)); }
    // endomorphism-valued one-forms along a T-frame direction (hol or antihol)
    SeriesMatrix C_hat(const FrameVector& x) const;
    SeriesMatrix Gamma_hat(const FrameVector& x) const;     // closed form (chern-1, chern-2)
    SeriesMatrix Cdag_hat(const FrameVector& ybar) const;   // closed form
    SeriesMatrix Cdag_hat_definitional(const FrameVector& ybar) const;
    SeriesMatrix transport(const std::vector<SeriesMatrix>& blocks, const FrameVector& x) const;  // sum x_{0,a} M^s_a lift(blocks[s])
    SeriesMatrix transport_conj(const std::vector<SeriesMatrix>& blocks, const FrameVector& ybar) const;
    const SeriesMatrix& lifted_C(int sigma) const { return liftC_[sigma]; }
    const SeriesMatrix& lifted_Gamma(int sigma) const { return liftGamma_[sigma]; }
    const SeriesMatrix& lifted_Cdag(int sigma) const { return liftCdag_[sigma]; }
    const SeriesMatrix& lifted_curvature(int s, int n) const { return liftCurv_[s][n]; }
    // D-hat_X(Phi) = X(Phi) + [Gamma_hat_X, Phi] for hol X; X(Phi) for antihol X
    SeriesMatrix D_hat(const FrameVector& x, const SeriesMatrix& phi) const;
    // coordinate-frame connection matrix of nabla-hat along a coordinate direction
    SeriesMatrix nabla_hat_form(const FrameVector& x) const;

    bool has_metric() const { return herm_.has_value(); }

private:
    void build_u();
    void build_frame();
    void build_lifts();
    std::unique_ptr<Substitution> make_lift_sub(const std::vector<Series>& up) const;

    FrobeniusData frob_;
    std::optional<small::HermitianData> herm_;
    small::DeformedFlats flats_;
    Truncation trunc_;
    Normalization norm_;
    int N_, K_;
    RingPtr big_;
    std::vector<Series> u_, ul_, ubar_;
    SeriesMatrix M_;
    int iterations_ = 0;
    std::unique_ptr<Substitution> lift_sub_;
    std::vector<std::vector<std::vector<Series>>> liftR_;  // [alpha][beta][i]
    std::vector<std::vector<std::vector<Series>>> liftCl_;  // lowered c_{abs}
    std::vector<FrameVector> Tcol_;  // T(tau_{m,b}) for m < n_max, coordinate frame
    SeriesMatrix P_, Pinv_;
    std::vector<SeriesMatrix> liftC_, liftGamma_, liftCdag_;
    std::vector<std::vector<SeriesMatrix>> liftCurv_;
    SeriesMatrix liftH_, liftHinvBig_;
    std::vector<SeriesMatrix> ChatBlock_, GammaBlock_, CdagBlock_;
    std::vector<std::vector<Series>> primProd_;  // [a][b] -> coefficients of gamma_a o gamma_b, flattened sigma
    mutable std::mutex memo_mu_;
    mutable std::map<std::tuple<int, int, int, int, int, int>, Series> memo3_;
};

}  // namespace ttlift::big
