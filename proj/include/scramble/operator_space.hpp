#pragma once

#include <vector>

#include "scramble/common.hpp"
#include "scramble/pauli.hpp"

namespace scramble {

// Which complete operator basis a distribution is coarse-grained over.
enum class ClassBasis { pauli_weight, tensor_rank };

// Probability mass over the weight (or rank) classes k = 1..k_max of an
// operator basis; p[k-1] is the total squared overlap with class k.
struct OperatorDistribution {
    ClassBasis basis = ClassBasis::pauli_weight;
    int n_sites = 0;
    RealVector p;

    int k_max() const { return static_cast<int>(p.size()); }
    double at(int k) const { return p(k - 1); }
};

struct DistributionMeasures {
    double mean = 0;
    double variance = 0;
    double ipr = 0;
};

// Overlap Tr(basis_element^dag op); the element is expected to be unit
// Hilbert-Schmidt norm for the probabilistic interpretation downstream.
complex expansion_coefficient(const Matrix& basis_element, const Matrix& op);

enum class DecompositionPath {
    direct,     // one O(d) trace per Pauli string
    transform,  // same coefficients via a Walsh-Hadamard pass per X mask
};

// Weight-class distribution of a traceless, unit-norm spin-1/2 operator.
// Both paths produce the same probabilities up to summation-order roundoff.
OperatorDistribution weight_distribution(const Matrix& op, int n_sites,
                                         DecompositionPath path = DecompositionPath::direct);

DistributionMeasures measures(const OperatorDistribution& dist);

template <class T>
struct TimeSeries {
    std::vector<double> times;
    std::vector<T> values;

    std::size_t size() const { return times.size(); }
    void push_back(double t, T v) {
        times.push_back(t);
        values.push_back(std::move(v));
    }
};

// Trapezoid mean of a sampled signal over the window [t0, tf]; the window
// endpoints must land on (or bracket at least two) sample points.
double time_average(const TimeSeries<double>& series, double t0, double tf);

// sqrt of the trapezoid mean of the squared deviation from the windowed mean.
double temporal_fluctuation(const TimeSeries<double>& series, double t0, double tf);

TimeSeries<double> mean_series(const TimeSeries<OperatorDistribution>& series);
TimeSeries<double> variance_series(const TimeSeries<OperatorDistribution>& series);
TimeSeries<double> ipr_series(const TimeSeries<OperatorDistribution>& series);

}  // namespace scramble
