#include "scramble/otoc.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "scramble/pauli.hpp"

namespace scramble {

namespace {

BigInt binomial(const BigInt& top, int k) {
    if (k < 0 || top < k) return 0;
    BigInt result = 1;
    for (int t = 0; t < k; ++t) {
        result *= top - t;
        result /= t + 1;  // exact: product of t+1 consecutive integers
    }
    return result;
}

BigInt factorial(int n) {
    BigInt result = 1;
    for (int t = 2; t <= n; ++t) result *= t;
    return result;
}

BigInt pow3(int e) {
    BigInt result = 1;
    for (int t = 0; t < e; ++t) result *= 3;
    return result;
}

using Poly = std::vector<BigRational>;  // coefficient of s^j at index j

Poly poly_multiply(const Poly& a, const Poly& b) {
    Poly out(a.size() + b.size() - 1, BigRational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

// C(a0 - s, j) as a polynomial in s
Poly choose_of_difference(int a0, int j) {
    Poly p{BigRational(1)};
    for (int t = 0; t < j; ++t) p = poly_multiply(p, Poly{BigRational(a0 - t), BigRational(-1)});
    const BigRational inv(1, factorial(j));
    for (auto& c : p) c *= inv;
    return p;
}

// C(s, m) as a polynomial in s
Poly choose_of_s(int m) {
    Poly p{BigRational(1)};
    for (int t = 0; t < m; ++t) p = poly_multiply(p, Poly{BigRational(-t), BigRational(1)});
    const BigRational inv(1, factorial(m));
    for (auto& c : p) c *= inv;
    return p;
}

// (R W R)(a, b) = (-1)^popcount(x&z) * (-1)^{z.(a^x)} * (-1)^{z.b} * W(a^x, b^x)
// for the Hermitian letter string R = i^{popcount(x&z)} X^x Z^z, so the OTOC
// trace costs O(d^2) per string instead of three dense products.
complex pauli_sandwich_overlap(const Matrix& w, const PauliString& r) {
    const Eigen::Index d = w.rows();
    const std::uint64_t x = r.x_mask;
    const std::uint64_t z = r.z_mask;
    const bool base = std::popcount(r.x_mask & r.z_mask) & 1;
    complex acc = 0.0;
    for (Eigen::Index b = 0; b < d; ++b) {
        const bool col_sign = std::popcount(z & std::uint64_t(b)) & 1;
        const Eigen::Index bx = Eigen::Index(std::uint64_t(b) ^ x);
        for (Eigen::Index a = 0; a < d; ++a) {
            const Eigen::Index ax = Eigen::Index(std::uint64_t(a) ^ x);
            const bool sign =
                base ^ col_sign ^ bool(std::popcount(z & std::uint64_t(ax)) & 1);
            const complex term = std::conj(w(a, b)) * w(ax, bx);
            acc += sign ? -term : term;
        }
    }
    return acc;
}

}  // namespace

double otoc(const Matrix& w_t, const Matrix& v) {
    if (w_t.rows() != w_t.cols() || v.rows() != v.cols() || w_t.rows() != v.rows())
        throw std::invalid_argument("otoc: operators must be square and of equal dimension");
    const double d = double(w_t.rows());
    const complex value = (w_t.adjoint() * v.adjoint() * w_t * v).trace() / d;
    if (std::abs(value.imag()) > 1e-10)
        throw contract_violation("otoc: trace has a non-negligible imaginary part");
    return value.real();
}

OtocAverage averaged_otoc(const Matrix& w_t, int n, int n_sites) {
    if (n_sites < 1 || n_sites > 14)
        throw capacity_error("averaged_otoc: n_sites out of dense range");
    if (n < 1 || n > n_sites)
        throw std::invalid_argument("averaged_otoc: class index out of range");
    const Eigen::Index d = Eigen::Index(1) << n_sites;
    if (w_t.rows() != d || w_t.cols() != d)
        throw std::invalid_argument("averaged_otoc: operator dimension mismatch");

    const auto strings = enumerate_weight_class(n_sites, n);
    complex acc = 0.0;
    for (const auto& r : strings) acc += pauli_sandwich_overlap(w_t, r);
    const complex mean = acc / (double(d) * double(strings.size()));
    if (std::abs(mean.imag()) > 1e-10)
        throw contract_violation("averaged_otoc: mean has a non-negligible imaginary part");
    return {n, mean.real()};
}

MomentVector moments_from_distribution(const OperatorDistribution& dist, int n_max) {
    if (n_max < 1) throw std::invalid_argument("moments_from_distribution: n_max must be >= 1");
    MomentVector result;
    result.n_max = n_max;
    result.moments = RealVector::Zero(n_max);
    for (int i = 1; i <= n_max; ++i) {
        double mu = 0.0;
        for (int k = 1; k <= dist.k_max(); ++k) mu += std::pow(double(k), i) * dist.at(k);
        result.moments(i - 1) = mu;
    }
    return result;
}

BigInt occurrence(int n, int m, int s, int n_sites) {
    if (m < 0 || m > n || n > n_sites || n < 0)
        throw std::invalid_argument("occurrence: need 0 <= m <= n <= n_sites");
    if (s < 0 || s > n_sites)
        throw std::invalid_argument("occurrence: weight s out of range");
    return binomial(n_sites - s, n - m) * binomial(s, m);
}

BigInt case_value(int n, int m) {
    if (m < 0 || m > n) throw std::invalid_argument("case_value: need 0 <= m <= n");
    BigInt even_tuples = 0;
    for (int i = 0; 2 * i <= m; ++i) even_tuples += binomial(m, 2 * i) * (BigInt(1) << (2 * i));
    return -pow3(n) + 2 * pow3(n - m) * even_tuples;
}

std::vector<BigRational> otoc_sum_polynomial(int n, int n_sites) {
    if (n < 1 || n > n_sites)
        throw std::invalid_argument("otoc_sum_polynomial: need 1 <= n <= n_sites");
    Poly total(std::size_t(n) + 1, BigRational(0));
    for (int m = 0; m <= n; ++m) {
        const Poly occ = poly_multiply(choose_of_difference(n_sites, n - m), choose_of_s(m));
        const BigRational value(case_value(n, m));
        for (std::size_t j = 0; j < occ.size(); ++j) total[j] += value * occ[j];
    }
    return total;
}

BigRational amplitude(int n) {
    if (n < 1 || n > 60) throw std::invalid_argument("amplitude: need 1 <= n <= 60");
    BigRational a = 0;
    for (int m = 0; m <= n; ++m) {
        const BigRational term(case_value(n, m), factorial(n - m) * factorial(m));
        a += ((n - m) % 2 != 0) ? -term : term;
    }
    return a;
}

ReconstructionReport reconstruct_moments(const std::vector<double>& otoc_averages,
                                         int n_sites) {
    const int n_max = int(otoc_averages.size());
    if (n_max < 1) throw std::invalid_argument("reconstruct_moments: no averages given");
    if (n_max > n_sites)
        throw std::invalid_argument("reconstruct_moments: more classes than sites");

    ReconstructionReport report;
    report.moments.n_max = n_max;
    report.moments.moments = RealVector::Zero(n_max);
    report.leading_weight.resize(std::size_t(n_max));

    for (int j = 1; j <= n_max; ++j) {
        const auto poly = otoc_sum_polynomial(j, n_sites);
        const double dim_cj =
            (binomial(n_sites, j) * pow3(j)).convert_to<double>();
        // dim(C_j) M_j = c_0 + sum_i c_i mu_i, solved for mu_j in order
        double target = otoc_averages[std::size_t(j - 1)] * dim_cj -
                        poly[0].convert_to<double>();
        for (int i = 1; i < j; ++i)
            target -= poly[std::size_t(i)].convert_to<double>() *
                      report.moments.moments(i - 1);
        const double leading = poly[std::size_t(j)].convert_to<double>();
        if (leading == 0.0)
            throw std::runtime_error("reconstruct_moments: vanishing leading coefficient");
        report.moments.moments(j - 1) = target / leading;
        report.leading_weight[std::size_t(j - 1)] = std::abs(leading) / dim_cj;
    }
    return report;
}

}  // namespace scramble
