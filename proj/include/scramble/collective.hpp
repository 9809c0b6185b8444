#pragma once

#include <array>
#include <vector>

#include "scramble/common.hpp"
#include "scramble/operator_space.hpp"

namespace scramble {

// Angular momentum matrices for spin j in the Dicke basis ordered
// m = j, j-1, ..., -j (row 0 is the top of the ladder).
struct SpinOperators {
    Matrix jx, jy, jz, jplus, jminus;
};

SpinOperators spin_operators(double j);

// Condon-Shortley <j1 m1, j2 m2 | j m>, evaluated with exact big-rational
// arithmetic and converted to double only at the end. Selection-rule
// violations return 0; non-half-integer inputs are rejected.
double clebsch_gordan(double j1, double m1, double j2, double m2, double j, double m);

enum class TensorRoute {
    clebsch_gordan,  // matrix elements directly from coupling coefficients
    lowering,        // T_LL from J_+^L, then repeated [J_-, .] steps
};

// Orthonormal spherical tensor operators T_LM, 0 <= L <= 2j, |M| <= L.
// Each T_LM is banded: the only nonzero entries sit at (row, col) with
// row = col - M in Dicke ordering.
class SphericalTensorBasis {
  public:
    static SphericalTensorBasis build(double j, TensorRoute route = TensorRoute::clebsch_gordan);
    // Reassemble from stored matrices (binary cache); validates shapes and
    // the band structure.
    static SphericalTensorBasis from_tensors(double j, std::vector<std::vector<Matrix>> tensors);

    double spin() const { return 0.5 * two_j_; }
    int dim() const { return two_j_ + 1; }
    int max_rank() const { return two_j_; }
    const Matrix& tensor(int l, int m) const;

  private:
    SphericalTensorBasis() = default;
    int two_j_ = 0;
    std::vector<std::vector<Matrix>> tensors_;  // [l][m + l]
};

SphericalTensorBasis build_tensor_basis(double j,
                                        TensorRoute route = TensorRoute::clebsch_gordan);

// Rank-class distribution P_k = sum_M |Tr(T_kM^dag op)|^2 / Tr(op^dag op),
// k = 1..2j, for a traceless collective operator of any overall scale.
OperatorDistribution rank_distribution(const Matrix& op, const SphericalTensorBasis& basis);

// One period U = U_z U_y U_x with U_mu = exp(-i(alpha_mu J_mu +
// gamma_mu/(2j) J_mu^2)); spin j represents n = 2j spin-1/2 constituents.
struct QKTConfig {
    double spin = 0;
    std::array<double, 3> alpha{1.7, 1.0, 0.8};
    std::array<double, 3> gamma{0.0, 0.0, 0.0};
};

// The parameter set used throughout: alphas as above and kick strengths
// (0.85, 0.9, 1.0) * gamma_z.
QKTConfig qkt_config(int n, double gamma_z);

Matrix build_qkt_unitary(const QKTConfig& config);

// Stroboscopic Heisenberg evolution of J_axis (normalized once at t = 0),
// recording the rank distribution after every kick; times are kick counts
// 0..n_kicks. Pass a prebuilt basis to avoid rebuilding it per call.
TimeSeries<OperatorDistribution> run_qkt_experiment(
    const QKTConfig& config, char initial_axis, int n_kicks,
    const SphericalTensorBasis* basis = nullptr);

}  // namespace scramble
