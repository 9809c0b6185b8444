#include "scramble/collective.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace scramble {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

// twice-value representation keeps half-integers exact
int to_twice(double j, const char* what) {
    const double twice = 2.0 * j;
    const double rounded = std::round(twice);
    if (std::abs(twice - rounded) > 1e-9)
        throw std::invalid_argument(std::string(what) + ": not a half-integer");
    return static_cast<int>(rounded);
}

// by value: push_back can reallocate the table mid-expression
cpp_int factorial(int n) {
    static std::vector<cpp_int> table = {1};
    while (static_cast<int>(table.size()) <= n) table.push_back(table.back() * int(table.size()));
    return table[n];
}

// <j1 m1, j2 m2 | J M> squared times extra, exact until the final sqrt.
// Arguments are twice-values; selection failures return 0.
double cg_twice(int tj1, int tm1, int tj2, int tm2, int tJ, int tM,
                const cpp_rational& extra) {
    if (tm1 + tm2 != tM) return 0.0;
    const int ta = tj1 + tj2 - tJ;
    const int tb = tj1 - tj2 + tJ;
    const int tc = -tj1 + tj2 + tJ;
    if (ta < 0 || tb < 0 || tc < 0) return 0.0;
    if (ta % 2 != 0) return 0.0;  // j1 + j2 and J differ by a half-integer
    const int a = ta / 2, b = tb / 2, c = tc / 2;

    const int jmm1 = (tj1 - tm1) / 2, jpm1 = (tj1 + tm1) / 2;
    const int jmm2 = (tj2 - tm2) / 2, jpm2 = (tj2 + tm2) / 2;
    const int JmM = (tJ - tM) / 2, JpM = (tJ + tM) / 2;
    const int r1 = (tJ - tj2 + tm1) / 2;  // J - j2 + m1
    const int r2 = (tJ - tj1 - tm2) / 2;  // J - j1 - m2

    const int klo = std::max({0, -r1, -r2});
    const int khi = std::min({a, jmm1, jpm2});
    if (khi < klo) return 0.0;

    // Racah sum via term ratios so the rationals stay small
    cpp_rational acc = 1, term = 1;
    for (int k = klo; k < khi; ++k) {
        term *= cpp_rational(cpp_int(-1) * (a - k) * (jmm1 - k) * (jpm2 - k),
                             cpp_int(k + 1) * (r1 + k + 1) * (r2 + k + 1));
        acc += term;
    }
    if (acc == 0) return 0.0;

    const cpp_int d_klo = factorial(klo) * factorial(a - klo) * factorial(jmm1 - klo) *
                          factorial(jpm2 - klo) * factorial(r1 + klo) * factorial(r2 + klo);
    const cpp_rational prefactor =
        cpp_rational(cpp_int(tJ + 1) * factorial(a) * factorial(b) * factorial(c),
                     factorial((tj1 + tj2 + tJ) / 2 + 1)) *
        cpp_rational(factorial(JpM) * factorial(JmM) * factorial(jmm1) * factorial(jpm1) *
                         factorial(jmm2) * factorial(jpm2),
                     1);
    const cpp_rational square = extra * prefactor * acc * acc / (d_klo * d_klo);
    const double sign = ((klo % 2 != 0) ^ (acc < 0)) ? -1.0 : 1.0;
    return sign * std::sqrt(square.convert_to<double>());
}

void validate_jm(double j, double m, int& tj, int& tm, const char* what) {
    tj = to_twice(j, what);
    tm = to_twice(m, what);
    if (tj < 0) throw std::invalid_argument(std::string(what) + ": negative j");
    if (std::abs(tm) > tj) throw std::invalid_argument(std::string(what) + ": |m| > j");
    if ((tj - tm) % 2 != 0)
        throw std::invalid_argument(std::string(what) + ": j - m is not an integer");
}

}  // namespace

double clebsch_gordan(double j1, double m1, double j2, double m2, double j, double m) {
    int tj1, tm1, tj2, tm2, tJ, tM;
    validate_jm(j1, m1, tj1, tm1, "clebsch_gordan: (j1, m1)");
    validate_jm(j2, m2, tj2, tm2, "clebsch_gordan: (j2, m2)");
    validate_jm(j, m, tJ, tM, "clebsch_gordan: (j, m)");
    return cg_twice(tj1, tm1, tj2, tm2, tJ, tM, 1);
}

SpinOperators spin_operators(double j) {
    const int tj = to_twice(j, "spin_operators: j");
    if (tj < 1) throw std::invalid_argument("spin_operators: j must be at least 1/2");
    if (tj + 1 > 512) throw capacity_error("spin_operators: dimension > 512");
    const int d = tj + 1;
    SpinOperators s;
    s.jz = Matrix::Zero(d, d);
    s.jplus = Matrix::Zero(d, d);
    const double jj = 0.5 * tj;
    for (int i = 0; i < d; ++i) {
        const double m = jj - i;  // Dicke ordering, m descending
        s.jz(i, i) = m;
        if (i >= 1) s.jplus(i - 1, i) = std::sqrt(jj * (jj + 1.0) - m * (m + 1.0));
    }
    s.jminus = s.jplus.adjoint();
    s.jx = 0.5 * (s.jplus + s.jminus);
    s.jy = complex(0, -0.5) * (s.jplus - s.jminus);
    return s;
}

const Matrix& SphericalTensorBasis::tensor(int l, int m) const {
    if (l < 0 || l > two_j_ || std::abs(m) > l)
        throw std::invalid_argument("SphericalTensorBasis::tensor: (l, m) out of range");
    return tensors_[l][m + l];
}

SphericalTensorBasis SphericalTensorBasis::build(double j, TensorRoute route) {
    const int tj = to_twice(j, "build_tensor_basis: j");
    if (tj < 1) throw std::invalid_argument("build_tensor_basis: j must be at least 1/2");
    const int d = tj + 1;
    if (d > 512) throw capacity_error("build_tensor_basis: dimension > 512");

    SphericalTensorBasis basis;
    basis.two_j_ = tj;
    basis.tensors_.resize(tj + 1);

    if (route == TensorRoute::clebsch_gordan) {
        for (int l = 0; l <= tj; ++l) {
            basis.tensors_[l].assign(2 * l + 1, Matrix::Zero(d, d));
            const cpp_rational weight(2 * l + 1, tj + 1);  // (2L+1)/(2j+1)
            for (int m = -l; m <= l; ++m) {
                Matrix& t = basis.tensors_[l][m + l];
                for (int col = 0; col < d; ++col) {
                    const int row = col - m;
                    if (row < 0 || row >= d) continue;
                    const int tm_col = tj - 2 * col;
                    const int tm_row = tj - 2 * row;
                    t(row, col) = cg_twice(tj, tm_col, 2 * l, 2 * m, tj, tm_row, weight);
                }
            }
        }
    } else {
        const SpinOperators s = spin_operators(j);
        basis.tensors_[0] = {Matrix::Identity(d, d) / std::sqrt(double(d))};
        std::vector<Matrix> tops(tj + 1);  // direction of J_+^l, renormalized each step
        Matrix power = Matrix::Identity(d, d);
        for (int l = 1; l <= tj; ++l) {
            power = s.jplus * power;
            power /= hs_norm(power);
            tops[l] = power;
        }
        // Highest rank first: rounding noise along higher ranks is amplified
        // by repeated lowering, so project it out while descending. The
        // projections and renormalizations are identities in exact arithmetic.
        for (int l = tj; l >= 1; --l) {
            basis.tensors_[l].assign(2 * l + 1, Matrix());
            Matrix t = ((l % 2 != 0) ? -1.0 : 1.0) * tops[l];
            for (int lp = l + 1; lp <= tj; ++lp) {
                const Matrix& h = basis.tensors_[lp][l + lp];
                t -= hs_inner(h, t) * h;
            }
            t /= hs_norm(t);
            basis.tensors_[l][2 * l] = t;
            for (int m = l; m > -l; --m) {
                t = (s.jminus * t - t * s.jminus) /
                    std::sqrt(double(l + m) * double(l - m + 1));
                for (int lp = l + 1; lp <= tj; ++lp) {
                    const Matrix& h = basis.tensors_[lp][m - 1 + lp];
                    t -= hs_inner(h, t) * h;
                }
                t /= hs_norm(t);
                basis.tensors_[l][m - 1 + l] = t;
            }
        }
    }
    return basis;
}

SphericalTensorBasis build_tensor_basis(double j, TensorRoute route) {
    return SphericalTensorBasis::build(j, route);
}

SphericalTensorBasis SphericalTensorBasis::from_tensors(
    double j, std::vector<std::vector<Matrix>> tensors) {
    const int tj = to_twice(j, "from_tensors: j");
    const int d = tj + 1;
    if (static_cast<int>(tensors.size()) != tj + 1)
        throw std::invalid_argument("from_tensors: wrong rank count");
    for (int l = 0; l <= tj; ++l) {
        if (static_cast<int>(tensors[l].size()) != 2 * l + 1)
            throw std::invalid_argument("from_tensors: wrong component count");
        for (int m = -l; m <= l; ++m) {
            Matrix& t = tensors[l][m + l];
            if (t.rows() != d || t.cols() != d)
                throw std::invalid_argument("from_tensors: wrong matrix dimension");
            for (int col = 0; col < d; ++col) {
                for (int row = 0; row < d; ++row) {
                    if (row == col - m) continue;
                    if (std::abs(t(row, col)) > 1e-12)
                        throw std::invalid_argument("from_tensors: matrix is not banded");
                    t(row, col) = 0;
                }
            }
        }
    }
    SphericalTensorBasis basis;
    basis.two_j_ = tj;
    basis.tensors_ = std::move(tensors);
    return basis;
}

OperatorDistribution rank_distribution(const Matrix& op, const SphericalTensorBasis& basis) {
    const int d = basis.dim();
    if (op.rows() != d || op.cols() != d)
        throw std::invalid_argument("rank_distribution: operator dimension mismatch");
    const double norm2 = std::abs(hs_inner(op, op));
    if (norm2 <= 0) throw std::invalid_argument("rank_distribution: zero operator");
    if (std::abs(op.trace()) > 1e-10 * std::max(1.0, std::sqrt(norm2)))
        throw contract_violation("rank_distribution: operator is not traceless");

    OperatorDistribution dist;
    dist.basis = ClassBasis::tensor_rank;
    dist.n_sites = basis.max_rank();
    dist.p = RealVector::Zero(basis.max_rank());
    for (int l = 1; l <= basis.max_rank(); ++l) {
        double mass = 0;
        for (int m = -l; m <= l; ++m) {
            const Matrix& t = basis.tensor(l, m);
            complex f = 0;
            const int col_lo = std::max(0, m);
            const int col_hi = std::min(d, d + m);
            for (int col = col_lo; col < col_hi; ++col)
                f += std::conj(t(col - m, col)) * op(col - m, col);
            mass += std::norm(f);
        }
        dist.p(l - 1) = mass / norm2;
    }
    return dist;
}

QKTConfig qkt_config(int n, double gamma_z) {
    if (n < 1) throw std::invalid_argument("qkt_config: n < 1");
    QKTConfig c;
    c.spin = 0.5 * n;
    c.gamma = {0.85 * gamma_z, 0.9 * gamma_z, gamma_z};
    return c;
}

Matrix build_qkt_unitary(const QKTConfig& config) {
    const SpinOperators s = spin_operators(config.spin);
    const Matrix* axes[3] = {&s.jx, &s.jy, &s.jz};
    const int d = static_cast<int>(s.jz.rows());
    Matrix u = Matrix::Identity(d, d);
    for (int mu = 0; mu < 3; ++mu) {
        const Matrix& jmu = *axes[mu];
        const Matrix gen = config.alpha[mu] * jmu +
                           (config.gamma[mu] / (2.0 * config.spin)) * (jmu * jmu);
        Eigen::SelfAdjointEigenSolver<Matrix> es(gen);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("build_qkt_unitary: eigendecomposition failed");
        Vector phase(d);
        for (int i = 0; i < d; ++i) {
            const double lambda = es.eigenvalues()(i);
            phase(i) = complex(std::cos(lambda), -std::sin(lambda));  // e^{-i lambda}
        }
        // U = U_z U_y U_x: x is applied first, so left-multiply in mu order
        u = (es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint()) * u;
    }
    return u;
}

TimeSeries<OperatorDistribution> run_qkt_experiment(const QKTConfig& config, char initial_axis,
                                                    int n_kicks,
                                                    const SphericalTensorBasis* basis) {
    if (n_kicks < 0) throw std::invalid_argument("run_qkt_experiment: negative kick count");
    const SpinOperators s = spin_operators(config.spin);

    std::optional<SphericalTensorBasis> local;
    if (!basis) local = build_tensor_basis(config.spin);
    const SphericalTensorBasis& b = basis ? *basis : *local;
    if (b.dim() != s.jz.rows())
        throw std::invalid_argument("run_qkt_experiment: basis dimension mismatch");

    Matrix op;
    switch (initial_axis) {
        case 'x': op = s.jx; break;
        case 'y': op = s.jy; break;
        case 'z': op = s.jz; break;
        default: throw std::invalid_argument("run_qkt_experiment: axis must be x, y or z");
    }
    op /= hs_norm(op);

    const Matrix u = build_qkt_unitary(config);
    const Matrix udag = u.adjoint();

    TimeSeries<OperatorDistribution> series;
    series.times.reserve(n_kicks + 1);
    series.values.reserve(n_kicks + 1);
    series.push_back(0.0, rank_distribution(op, b));
    for (int kick = 1; kick <= n_kicks; ++kick) {
        op = udag * op * u;
        series.push_back(double(kick), rank_distribution(op, b));
    }
    return series;
}

}  // namespace scramble
