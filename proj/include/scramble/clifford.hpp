#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "scramble/common.hpp"
#include "scramble/operator_space.hpp"
#include "scramble/pauli.hpp"

namespace scramble {

enum class GateKind { h, s, t, cx };

struct Gate {
    GateKind kind = GateKind::h;
    int site = 0;     // control site for cx
    int target = -1;  // cx target, unused otherwise
};

using CircuitLayer = std::vector<Gate>;

struct CircuitInstance {
    int n_sites = 0;
    double p_t = 0.0;
    std::uint64_t seed = 0;
    std::vector<CircuitLayer> layers;
};

// One layer: a random disjoint pairing contributes each candidate pair as
// a CX with probability 1/2; every unpaired site draws H or S with equal
// probability, so the Clifford gates cover each site exactly once. With
// probability p_t a single T gate is appended on a uniformly chosen site,
// acting after that site's Clifford gate. The T draws consume the random
// stream unconditionally, so instances sampled with the same seed share
// an identical Clifford backbone at every p_t.
CircuitInstance sample_circuit(int n_sites, int depth, double p_t, std::uint64_t seed);

// Real combination of Hermitian Pauli strings, closed under Heisenberg
// conjugation by the Clifford+T gate set. Clifford gates permute the
// strings with a sign; each T at most doubles the term count.
class PauliSum {
  public:
    struct Mask {
        std::uint64_t x = 0, z = 0;
        bool operator==(const Mask&) const = default;
    };
    struct MaskHash {
        std::size_t operator()(const Mask& m) const {
            return static_cast<std::size_t>(splitmix64(m.x ^ splitmix64(m.z)));
        }
    };
    using TermMap = std::unordered_map<Mask, double, MaskHash>;

    static constexpr std::size_t kMaxTerms = std::size_t(1) << 22;

    explicit PauliSum(const PauliString& initial, double coefficient = 1.0);

    int n_sites() const { return n_sites_; }
    std::size_t term_count() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }
    double coefficient(std::uint64_t x_mask, std::uint64_t z_mask) const;
    double norm2() const;  // sum of squared coefficients

    // O -> U(dag) O U, applied termwise
    void conjugate(const Gate& gate);
    void conjugate(const CircuitLayer& layer);

    // P_k = sum of coefficient^2 over weight-k terms, normalized; requires
    // no identity component.
    OperatorDistribution weight_distribution() const;

  private:
    std::uint64_t site_bit(int site) const;

    int n_sites_ = 0;
    TermMap terms_;
};

PauliSum conjugate(const PauliSum& sum, const Gate& gate);

struct CircuitRun {
    CircuitInstance instance;
    TimeSeries<OperatorDistribution> distributions;  // times are layer counts 0..depth
    std::vector<std::size_t> term_counts;            // one entry per recorded layer
    std::vector<double> norm2;
};

// Heisenberg propagation of the normalized single-site Pauli at initial_site
// (1-based), recording the weight distribution after every layer.
CircuitRun run_circuit_experiment(const CircuitInstance& instance, int initial_site,
                                  char initial_axis);

// Arithmetic mean of P_k across runs per (layer, k); all runs must share
// site count and depth.
TimeSeries<OperatorDistribution> ensemble_average(const std::vector<CircuitRun>& runs);

struct CircuitEnsembleConfig {
    int n_sites = 6;
    int depth = 60;
    double p_t = 0.5;
    int n_instances = 40;
    int initial_site = 1;
    char initial_axis = 'z';
    std::uint64_t seed = 1;
};

struct CircuitEnsemble {
    std::vector<CircuitRun> runs;
    TimeSeries<OperatorDistribution> averaged;
};

// Samples n_instances circuits on per-instance seed streams derived from
// config.seed, runs each, and averages.
CircuitEnsemble run_circuit_ensemble(const CircuitEnsembleConfig& config);

}  // namespace scramble
