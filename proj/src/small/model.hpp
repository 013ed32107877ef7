#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/matrix.hpp"
#include "core/residual.hpp"

namespace ttlift::small {

using ScalarMatrix = std::vector<std::vector<Scalar>>;

class InvalidModel : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class IntegrabilityError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// E = sum_a (Q[a][b] t^b_0 + r[a]) d/dt^a_0
struct EulerField {
    ScalarMatrix Q;
    std::vector<Scalar> r;
    Scalar weight_d;
};

enum class RealKind { K, H, abs_a };

/// Real structure, given as K (k(Y) = K conj(Y)), as h directly, or for
/// N = 1 as h = |a| eta.
struct RealStructure {
    RealKind kind = RealKind::K;
    SeriesMatrix matrix;
    Series a;
};

struct CVData {
    SeriesMatrix U;
    SeriesMatrix Q;
};

/// Small phase space data. All series live in `ring` (level-0 variables only).
struct FrobeniusModel {
    std::string name;
    int N = 1;
    RingPtr ring;
    ScalarMatrix eta;
    int unit = 0;
    Series F;
    EulerField euler;
    std::optional<RealStructure> real;
    std::optional<SeriesMatrix> A;
    std::optional<CVData> cv;
    ScalarMatrix theta_constants;  // [beta][i], i >= 1 used; may be empty
};

VarId t0(int flavor);
VarId tb0(int flavor);

/// Structure constants and Euler data derived from a model.
struct FrobeniusData {
    FrobeniusModel model;
    ScalarMatrix eta_inv;
    SeriesMatrix eta;      // constant
    SeriesMatrix eta_inv_m;
    std::vector<SeriesMatrix> C;  // C[a](mu, b) = c^mu_{ab}
    std::vector<Series> E;        // components of the Euler field
    SeriesMatrix CE;              // C_E
    SeriesMatrix Rinf;            // nabla E = Q
    int r0_sign = -1;             // R0 = r0_sign * C_E, the convention that satisfies the flow axiom

    SeriesMatrix R0() const { return r0_sign > 0 ? CE : -CE; }
    SeriesMatrix eta_adjoint(const SeriesMatrix& phi) const;
};

FrobeniusData structure_constants(const FrobeniusModel& m);
Residual wdvv_residual(const FrobeniusData& d);
std::vector<NamedResidual> saito_residuals_small(const FrobeniusData& d);
// Validates eta and F; throws InvalidModel.
void validate_model(const FrobeniusModel& m);

struct DeformedFlats {
    std::vector<std::vector<Series>> theta;            // [beta][i]
    std::vector<std::vector<std::vector<Series>>> R;   // [alpha][beta][i]
    int i_max = 0;
};

DeformedFlats deformed_flats(const FrobeniusData& d, int i_max);
Residual flats_recursion_residual(const FrobeniusData& d, const DeformedFlats& f);
Residual flats_string_residual(const FrobeniusData& d, const DeformedFlats& f);

struct HermitianData {
    SeriesMatrix H, Hinv, K;
    Residual involution;  // K conj(K) - Id
    Residual hermitian;   // H^T - conj(H)
    bool involution_required = true;
    std::vector<SeriesMatrix> Gamma;              // Gamma[a](mu, b) = f^mu_{ab}
    std::vector<std::vector<SeriesMatrix>> Curv;  // Curv[a][b] = R_{a, bbar}
    std::vector<SeriesMatrix> Cdag;               // Cdag[b] = C^dagger_{bbar}

    SeriesMatrix h_adjoint(const SeriesMatrix& phi) const;
};

HermitianData hermitian_from_k(const FrobeniusData& d, const RealStructure& k);

// Per-identity small residual blocks, reused by the lifted transport checks.
SeriesMatrix first_tt_block(const FrobeniusData& d, const HermitianData& h, int a, int b);
SeriesMatrix second_tt_block(const FrobeniusData& d, const HermitianData& h, int a, int b);
SeriesMatrix compat_block(const FrobeniusData& d, const HermitianData& h, int a);
SeriesMatrix cov_derivative(const HermitianData& h, const SeriesMatrix& phi, int a);

std::vector<NamedResidual> tt_and_potential_residuals_small(const FrobeniusData& d, const HermitianData& h);

}  // namespace ttlift::small
