#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

#include "scramble/common.hpp"
#include "scramble/operator_space.hpp"

namespace scramble {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

struct MomentVector {
    int n_max = 0;
    RealVector moments;  // moments(i-1) holds the ith moment

    double at(int i) const { return moments(i - 1); }
};

struct OtocAverage {
    int n = 0;
    double value = 0;
};

// Infinite-temperature OTOC (1/d) Tr(W^dag V^dag W V) for Hermitian
// (unnormalized) Pauli-like arguments; the value lies in [-1, 1] and the
// imaginary part of the trace must vanish.
double otoc(const Matrix& w_t, const Matrix& v);

// Mean OTOC over every weight-n Pauli string, C(N,n) 3^n of them.
OtocAverage averaged_otoc(const Matrix& w_t, int n, int n_sites);

MomentVector moments_from_distribution(const OperatorDistribution& dist, int n_max);

// Number of weight-n strings sharing exactly m non-identity sites with a
// weight-s operator on N sites.
BigInt occurrence(int n, int m, int s, int n_sites);

// Net commutation count (+1 per commuting pair, -1 per anticommuting) over
// the 3^n letter choices of a case with m overlapping non-identity sites.
BigInt case_value(int n, int m);

// Coefficients c_0..c_n (in s) of sum_R (+-1 commutation sign), the sum
// running over all weight-n strings R against a fixed weight-s string;
// equals sum_m occurrence * case_value expanded symbolically.
std::vector<BigRational> otoc_sum_polynomial(int n, int n_sites);

// Leading (degree-n) coefficient of otoc_sum_polynomial, independent of the
// site count.
BigRational amplitude(int n);

struct ReconstructionReport {
    MomentVector moments;
    // |leading coefficient| / dim(C_n) per order: how strongly the nth
    // moment is actually represented in the nth OTOC average
    std::vector<double> leading_weight;
};

// Inverts the triangular linear system relating OTOC class averages to
// distribution moments: otoc_averages[j-1] holds the weight-j average.
ReconstructionReport reconstruct_moments(const std::vector<double>& otoc_averages,
                                         int n_sites);

}  // namespace scramble
