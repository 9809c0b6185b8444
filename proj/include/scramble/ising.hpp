#pragma once

#include <vector>

#include "scramble/common.hpp"
#include "scramble/operator_space.hpp"

namespace scramble {

// H = J sum_n sigma_z^n sigma_z^(n+1) + B sum_n (cos(theta) sigma_x^n +
//                                                sin(theta) sigma_z^n)
// on an open chain of unnormalized Paulis. theta = 0 is the transverse-field
// integrable point; theta = pi/2 commutes with every sigma_z.
struct IsingConfig {
    int n_sites = 0;
    double j_coupling = 1.0;
    double field_b = 1.0;
    double theta = 0.0;
};

Matrix build_ising(const IsingConfig& config);

// Heisenberg-picture evolution O(t) = e^{iHt} O e^{-iHt} from a single
// eigendecomposition, reused across the whole time grid.
class HeisenbergPropagator {
  public:
    explicit HeisenbergPropagator(const Matrix& hamiltonian);

    const RealVector& eigenvalues() const { return eigenvalues_; }
    const Matrix& eigenvectors() const { return eigenvectors_; }

    Matrix to_eigenbasis(const Matrix& op) const;
    // op_eig must come from to_eigenbasis; the result is back in the lab frame.
    Matrix evolve_in_eigenbasis(const Matrix& op_eig, double t) const;
    Matrix evolve(const Matrix& op, double t) const;

  private:
    RealVector eigenvalues_;
    Matrix eigenvectors_;
};

std::vector<Matrix> evolve_heisenberg(const Matrix& hamiltonian, const Matrix& op0,
                                      const std::vector<double>& times);

// Seeds O(0) with the axis Pauli at the given 1-based site (normalized to
// unit Hilbert-Schmidt norm; the overall scale cancels in the distribution)
// and records the weight-class distribution across the time grid.
TimeSeries<OperatorDistribution> run_ising_experiment(
    const IsingConfig& config, int site, char axis, const std::vector<double>& times,
    DecompositionPath path = DecompositionPath::direct);

}  // namespace scramble
