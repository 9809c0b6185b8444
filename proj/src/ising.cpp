#include "scramble/ising.hpp"

#include <cmath>
#include <stdexcept>

#include "scramble/pauli.hpp"

namespace scramble {

Matrix build_ising(const IsingConfig& config) {
    const int n = config.n_sites;
    if (n < 2) throw std::invalid_argument("build_ising: need at least two sites");
    if (n > 14) throw capacity_error("build_ising: n_sites > 14");
    const std::uint64_t dim = std::uint64_t{1} << n;
    const double bx = config.field_b * std::cos(config.theta);
    const double bz = config.field_b * std::sin(config.theta);

    Matrix h = Matrix::Zero(dim, dim);
    for (std::uint64_t b = 0; b < dim; ++b) {
        double diag = 0;
        for (int site = 0; site < n; ++site) {
            const double z = (b >> (n - 1 - site)) & 1 ? -1.0 : 1.0;
            diag += bz * z;
            if (site + 1 < n) {
                const double z_next = (b >> (n - 2 - site)) & 1 ? -1.0 : 1.0;
                diag += config.j_coupling * z * z_next;
            }
        }
        h(b, b) = diag;
        for (int site = 0; site < n; ++site)
            h(b ^ (std::uint64_t{1} << (n - 1 - site)), b) += bx;
    }
    return h;
}

HeisenbergPropagator::HeisenbergPropagator(const Matrix& hamiltonian) {
    if (hamiltonian.rows() != hamiltonian.cols())
        throw std::invalid_argument("HeisenbergPropagator: non-square Hamiltonian");
    if (!is_hermitian(hamiltonian, 1e-8))
        throw contract_violation("HeisenbergPropagator: Hamiltonian is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hamiltonian);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("HeisenbergPropagator: eigendecomposition failed");
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
}

Matrix HeisenbergPropagator::to_eigenbasis(const Matrix& op) const {
    if (op.rows() != eigenvectors_.rows() || op.cols() != eigenvectors_.cols())
        throw std::invalid_argument("HeisenbergPropagator: operator dimension mismatch");
    return eigenvectors_.adjoint() * op * eigenvectors_;
}

Matrix HeisenbergPropagator::evolve_in_eigenbasis(const Matrix& op_eig, double t) const {
    const Eigen::Index d = eigenvalues_.size();
    Vector u(d);
    for (Eigen::Index a = 0; a < d; ++a) {
        const double phi = eigenvalues_(a) * t;
        u(a) = complex(std::cos(phi), std::sin(phi));  // e^{+i lambda t}
    }
    const Matrix w = eigenvectors_ * u.asDiagonal();
    return w * op_eig * w.adjoint();
}

Matrix HeisenbergPropagator::evolve(const Matrix& op, double t) const {
    return evolve_in_eigenbasis(to_eigenbasis(op), t);
}

std::vector<Matrix> evolve_heisenberg(const Matrix& hamiltonian, const Matrix& op0,
                                      const std::vector<double>& times) {
    const HeisenbergPropagator prop(hamiltonian);
    const Matrix op_eig = prop.to_eigenbasis(op0);
    std::vector<Matrix> out;
    out.reserve(times.size());
    for (const double t : times) out.push_back(prop.evolve_in_eigenbasis(op_eig, t));
    return out;
}

TimeSeries<OperatorDistribution> run_ising_experiment(const IsingConfig& config, int site,
                                                      char axis,
                                                      const std::vector<double>& times,
                                                      DecompositionPath path) {
    if (site < 1 || site > config.n_sites)
        throw std::invalid_argument("run_ising_experiment: site must be in [1, n_sites]");
    if (times.empty()) throw std::invalid_argument("run_ising_experiment: empty time grid");

    const HeisenbergPropagator prop(build_ising(config));
    const Matrix op0 = dense_matrix(single_site_pauli(config.n_sites, site - 1, axis), true);
    const Matrix op_eig = prop.to_eigenbasis(op0);

    TimeSeries<OperatorDistribution> series;
    series.times = times;
    series.values.reserve(times.size());
    for (const double t : times)
        series.values.push_back(
            weight_distribution(prop.evolve_in_eigenbasis(op_eig, t), config.n_sites, path));
    return series;
}

}  // namespace scramble
