#pragma once

#include <string>
#include <vector>

#include "scramble/common.hpp"

namespace scramble {

// Reference adjacent-gap-ratio values in the min/max convention.
inline constexpr double kGapRatioPoisson = 0.386;
inline constexpr double kGapRatioGoe = 0.535;
inline constexpr double kGapRatioCue = 0.599;

enum class SpectralEnsemble { goe, cue, poisson };

// Mean over j of min(s_j, s_{j+1})/max(s_j, s_{j+1}) for the adjacent gaps
// s_j of a sorted spectrum. Zero gaps contribute ratio 0 and raise the
// degenerate flag. Invariant under shifting and positively rescaling the
// levels.
double gap_ratio(const std::vector<double>& levels, bool* degenerate = nullptr);

// Gap ratio of the sorted eigenphases of a unitary, including the
// wrap-around gap that closes the circle.
double floquet_gap_ratio(const Matrix& u, bool* degenerate = nullptr);

// (r - poisson) / (reference - poisson); 0 marks integrable, 1 marks the
// random-matrix value.
double normalize_gap_ratio(double r_bar, SpectralEnsemble reference);

// Gap ratio per sector spectrum, combined with dimension weights.
double sector_weighted_gap_ratio(const std::vector<std::vector<double>>& sector_levels,
                                 bool* degenerate = nullptr);

// Sorted levels with independent unit-mean exponential gaps.
std::vector<double> sample_poisson_levels(int count, Rng& rng);

// Real symmetric Gaussian matrix (A + A^T)/2 with unit-variance entries of A.
RealMatrix sample_goe(int dim, Rng& rng);

// Von Neumann entropy (natural log) of the reduced state of the first
// n_sites/2 sites of a pure state.
double bipartite_entropy(const Vector& state, int n_sites);

// Mean bipartite entropy over the central bulk_fraction of eigenstates,
// ordered by energy.
double bulk_entanglement_entropy(const Matrix& h, int n_sites, double bulk_fraction = 0.5);

struct SectorBlocks {
    Matrix even;
    Matrix odd;
};

// Splits a Hamiltonian commuting with the site-reversal permutation into
// its reflection-parity blocks; their spectra together reproduce the full
// spectrum.
SectorBlocks reflection_desymmetrize(const Matrix& h, int n_sites);

struct SpectrumStatistics {
    double r_bar = 0;
    double r_bar_norm = 0;
    SpectralEnsemble reference = SpectralEnsemble::goe;
    std::vector<std::string> sector_labels;
    std::vector<int> sector_dims;
    bool degenerate = false;
};

}  // namespace scramble
