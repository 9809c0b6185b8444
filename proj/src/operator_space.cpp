#include "scramble/operator_space.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace scramble {

complex expansion_coefficient(const Matrix& basis_element, const Matrix& op) {
    if (basis_element.rows() != op.rows() || basis_element.cols() != op.cols())
        throw std::invalid_argument("expansion_coefficient: dimension mismatch");
    return hs_inner(basis_element, op);
}

namespace {

void check_distribution_input(const Matrix& op, int n_sites) {
    if (n_sites < 1) throw std::invalid_argument("weight_distribution: n_sites < 1");
    if (n_sites > 14) throw capacity_error("weight_distribution: n_sites > 14");
    const Eigen::Index dim = Eigen::Index{1} << n_sites;
    if (op.rows() != dim || op.cols() != dim)
        throw std::invalid_argument("weight_distribution: operator is not 2^n x 2^n");
    if (std::abs(op.trace()) > 1e-10)
        throw contract_violation("weight_distribution: operator is not traceless");
    if (std::abs(std::abs(hs_inner(op, op)) - 1.0) > 1e-8)
        throw contract_violation("weight_distribution: operator is not unit Hilbert-Schmidt norm");
}

}  // namespace

OperatorDistribution weight_distribution(const Matrix& op, int n_sites,
                                         DecompositionPath path) {
    check_distribution_input(op, n_sites);
    const std::uint64_t dim = std::uint64_t{1} << n_sites;
    const double norm2 = std::pow(0.5, n_sites);  // |1/sqrt(2)|^2 per site

    OperatorDistribution dist;
    dist.basis = ClassBasis::pauli_weight;
    dist.n_sites = n_sites;
    dist.p = RealVector::Zero(n_sites);

    std::vector<complex> v(dim), w(dim);
    for (std::uint64_t x = 0; x < dim; ++x) {
        for (std::uint64_t k = 0; k < dim; ++k) v[k] = op(k, k ^ x);
        if (path == DecompositionPath::direct) {
            for (std::uint64_t z = 0; z < dim; ++z) {
                if ((x | z) == 0) continue;
                complex f = 0;
                for (std::uint64_t k = 0; k < dim; ++k)
                    f += (std::popcount(z & k) & 1) ? -v[k] : v[k];
                dist.p(std::popcount(x | z) - 1) += std::norm(f) * norm2;
            }
        } else {
            // w[z] = sum_k (-1)^{z.k} v[k] by a radix-2 butterfly pass
            w = v;
            for (std::uint64_t h = 1; h < dim; h <<= 1) {
                for (std::uint64_t i = 0; i < dim; i += h << 1) {
                    for (std::uint64_t j = i; j < i + h; ++j) {
                        const complex a = w[j], b = w[j + h];
                        w[j] = a + b;
                        w[j + h] = a - b;
                    }
                }
            }
            for (std::uint64_t z = 0; z < dim; ++z) {
                if ((x | z) == 0) continue;
                dist.p(std::popcount(x | z) - 1) += std::norm(w[z]) * norm2;
            }
        }
    }
    return dist;
}

DistributionMeasures measures(const OperatorDistribution& dist) {
    if (dist.p.size() == 0) throw std::invalid_argument("measures: empty distribution");
    if (dist.p.minCoeff() < -1e-10)
        throw contract_violation("measures: negative class probability");
    if (std::abs(dist.p.sum() - 1.0) > 1e-8)
        throw contract_violation("measures: probabilities do not sum to 1");
    DistributionMeasures m;
    double second = 0;
    for (int k = 1; k <= dist.k_max(); ++k) {
        const double pk = dist.at(k);
        m.mean += k * pk;
        second += double(k) * k * pk;
        m.ipr += pk * pk;
    }
    m.variance = second - m.mean * m.mean;
    return m;
}

namespace {

std::pair<std::size_t, std::size_t> window_indices(const TimeSeries<double>& series,
                                                   double t0, double tf) {
    const auto& t = series.times;
    if (t.size() != series.values.size())
        throw std::invalid_argument("time series: times/values length mismatch");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (t[i] <= t[i - 1]) throw std::invalid_argument("time series: times not increasing");
    if (tf <= t0) throw std::invalid_argument("time window: tf <= t0");
    const double eps = 1e-9 * (1.0 + std::abs(t0) + std::abs(tf));
    std::size_t i0 = 0;
    while (i0 < t.size() && t[i0] < t0 - eps) ++i0;
    std::size_t i1 = t.size();
    while (i1 > 0 && t[i1 - 1] > tf + eps) --i1;
    if (i1 < i0 + 2) throw std::invalid_argument("time window: fewer than two samples");
    return {i0, i1 - 1};
}

}  // namespace

double time_average(const TimeSeries<double>& series, double t0, double tf) {
    const auto [i0, i1] = window_indices(series, t0, tf);
    const auto& t = series.times;
    const auto& y = series.values;
    double acc = 0;
    for (std::size_t i = i0; i < i1; ++i)
        acc += 0.5 * (t[i + 1] - t[i]) * (y[i] + y[i + 1]);
    return acc / (t[i1] - t[i0]);
}

double temporal_fluctuation(const TimeSeries<double>& series, double t0, double tf) {
    const double avg = time_average(series, t0, tf);
    const auto [i0, i1] = window_indices(series, t0, tf);
    const auto& t = series.times;
    const auto& y = series.values;
    auto dev = [&](std::size_t i) {
        const double d = y[i] - avg;
        return d * d;
    };
    double acc = 0;
    for (std::size_t i = i0; i < i1; ++i)
        acc += 0.5 * (t[i + 1] - t[i]) * (dev(i) + dev(i + 1));
    return std::sqrt(acc / (t[i1] - t[i0]));
}

namespace {

TimeSeries<double> component_series(const TimeSeries<OperatorDistribution>& series,
                                    double DistributionMeasures::* member) {
    TimeSeries<double> out;
    out.times = series.times;
    out.values.reserve(series.values.size());
    for (const auto& dist : series.values) out.values.push_back(measures(dist).*member);
    return out;
}

}  // namespace

TimeSeries<double> mean_series(const TimeSeries<OperatorDistribution>& series) {
    return component_series(series, &DistributionMeasures::mean);
}

TimeSeries<double> variance_series(const TimeSeries<OperatorDistribution>& series) {
    return component_series(series, &DistributionMeasures::variance);
}

TimeSeries<double> ipr_series(const TimeSeries<OperatorDistribution>& series) {
    return component_series(series, &DistributionMeasures::ipr);
}

}  // namespace scramble
