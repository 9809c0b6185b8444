#pragma once

#include "scramble/common.hpp"
#include "scramble/operator_space.hpp"

namespace scramble {

// Ensemble-averaged class distribution of a Haar-scrambled traceless
// operator, together with its moments. `ipr_leading` keeps only the
// dimension-counting sum; `ipr` adds the Porter-Thomas coefficient
// fluctuation term (d^2-2)/((d^2-1) d^2), which matters at small d.
struct HaarPrediction {
    int n_sites = 0;
    RealVector pk;  // classes k = 1..k_max
    double mean = 0;
    double second_moment = 0;
    double variance = 0;
    double ipr = 0;
    double ipr_leading = 0;
};

// Spin-1/2 chain of n sites, Pauli weight classes, d = 2^n.
HaarPrediction haar_spin_half(int n);

// Collective spin of n = 2J constituents, tensor rank classes, d = n + 1.
HaarPrediction haar_collective(int n);

// Haar-distributed d x d unitary: QR of a complex Ginibre matrix with the
// R-diagonal phase correction.
Matrix sample_haar_unitary(int dim, Rng& rng);

}  // namespace scramble
