#include "scramble/haar.hpp"

#include <cmath>
#include <stdexcept>

namespace scramble {

HaarPrediction haar_spin_half(int n) {
    if (n < 1) throw std::invalid_argument("haar_spin_half: n < 1");
    if (n > 20) throw capacity_error("haar_spin_half: n > 20");
    const double d2 = std::pow(4.0, n);  // exact up to n = 20
    const double denom = d2 - 1.0;

    HaarPrediction h;
    h.n_sites = n;
    h.pk = RealVector(n);
    double dim = 1.0;  // C(n,k) 3^k by recurrence
    double sum_sq = 0.0;
    for (int k = 1; k <= n; ++k) {
        dim *= 3.0 * double(n - k + 1) / double(k);
        h.pk(k - 1) = dim / denom;
        sum_sq += dim * dim;
    }
    h.mean = 0.75 * n * d2 / denom;
    h.second_moment = (3.0 / 16.0) * n * (3.0 * n + 1.0) * d2 / denom;
    h.variance = h.second_moment - h.mean * h.mean;
    h.ipr_leading = sum_sq / (denom * denom);
    h.ipr = h.ipr_leading + (d2 - 2.0) / (denom * d2);
    return h;
}

HaarPrediction haar_collective(int n) {
    if (n < 1) throw std::invalid_argument("haar_collective: n < 1");
    if (n > 511) throw capacity_error("haar_collective: n > 511");
    const double d = n + 1.0;
    const double d2 = d * d;
    const double denom = d2 - 1.0;

    HaarPrediction h;
    h.n_sites = n;
    h.pk = RealVector(n);
    for (int k = 1; k <= n; ++k) h.pk(k - 1) = (2.0 * k + 1.0) / denom;
    h.mean = (4.0 * n + 5.0) * (n + 1.0) / (6.0 * (n + 2.0));
    h.second_moment = (n * (3.0 * n + 5.0) + 1.0) * (n + 1.0) / (6.0 * (n + 2.0));
    h.variance = h.second_moment - h.mean * h.mean;
    h.ipr_leading = (4.0 * d2 * d - d - 3.0) / (3.0 * denom * denom);
    h.ipr = h.ipr_leading + (d2 - 2.0) / (denom * d2);
    return h;
}

Matrix sample_haar_unitary(int dim, Rng& rng) {
    if (dim < 1) throw std::invalid_argument("sample_haar_unitary: dim < 1");
    if (dim > 4096) throw capacity_error("sample_haar_unitary: dim > 4096");
    Matrix g(dim, dim);
    const double scale = std::sqrt(0.5);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i)
            g(i, j) = complex(gaussian(rng) * scale, gaussian(rng) * scale);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix u = qr.householderQ();
    const Matrix r = qr.matrixQR();
    for (int j = 0; j < dim; ++j) {
        const complex rjj = r(j, j);
        const double mag = std::abs(rjj);
        u.col(j) *= (mag > 0) ? rjj / mag : complex(1, 0);
    }
    return u;
}

}  // namespace scramble
