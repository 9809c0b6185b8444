#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace scramble {

using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using complex = std::complex<double>;

inline constexpr char kVersion[] = "0.1.0";

// Thrown when an input violates a documented guard (dimension caps, term
// budgets) rather than being merely malformed.
struct capacity_error : std::length_error {
    using std::length_error::length_error;
};

// Thrown when data fails a contract the caller promised to uphold
// (non-Hermitian Hamiltonian, non-unit norm operator, ...).
struct contract_violation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline complex hs_inner(const Matrix& a, const Matrix& b) {
    // Tr(a^dag b) without forming the product.
    return (a.conjugate().cwiseProduct(b)).sum();
}

inline double hs_norm(const Matrix& a) {
    return std::sqrt(std::abs(hs_inner(a, a)));
}

inline double max_abs(const Matrix& a) {
    return a.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& a, double tol) {
    return max_abs(a - a.adjoint()) <= tol;
}

inline std::vector<double> linspace(double t0, double tf, int steps) {
    if (steps < 2) throw std::invalid_argument("linspace: need at least two points");
    if (!(tf > t0)) throw std::invalid_argument("linspace: tf must exceed t0");
    std::vector<double> t(steps);
    for (int i = 0; i < steps; ++i) t[i] = t0 + (tf - t0) * double(i) / double(steps - 1);
    return t;
}

// --- deterministic RNG utilities -----------------------------------------
//
// std::uniform_int_distribution and friends are implementation-defined, so
// every random draw in the library goes through these helpers to keep runs
// reproducible across standard libraries.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stream i of a master seed; used for per-instance / per-sample streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master + 0x9e3779b97f4a7c15ULL * (index + 1));
}

using Rng = std::mt19937_64;

inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    // rejection sampling, bias-free
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t v = rng();
    while (v >= limit) v = rng();
    return v % n;
}

inline double gaussian(Rng& rng) {
    // Box-Muller; one fresh pair of uniforms per call
    const double u = 1.0 - uniform_unit(rng);  // (0, 1]
    const double v = uniform_unit(rng);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925287 * v);
}

}  // namespace scramble
