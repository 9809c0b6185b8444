#include "scramble/clifford.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace scramble {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_gate(const Gate& g, int n_sites) {
    if (g.site < 0 || g.site >= n_sites)
        throw std::invalid_argument("conjugate: gate site out of range");
    if (g.kind == GateKind::cx) {
        if (g.target < 0 || g.target >= n_sites)
            throw std::invalid_argument("conjugate: cx target out of range");
        if (g.target == g.site)
            throw std::invalid_argument("conjugate: cx needs distinct sites");
    }
}

}  // namespace

CircuitInstance sample_circuit(int n_sites, int depth, double p_t, std::uint64_t seed) {
    if (n_sites < 1 || n_sites > 64)
        throw std::invalid_argument("sample_circuit: n_sites out of range");
    if (depth < 0) throw std::invalid_argument("sample_circuit: negative depth");
    if (!(p_t >= 0.0 && p_t <= 1.0))
        throw std::invalid_argument("sample_circuit: p_t outside [0, 1]");

    Rng rng(seed);
    CircuitInstance inst;
    inst.n_sites = n_sites;
    inst.p_t = p_t;
    inst.seed = seed;
    inst.layers.reserve(depth);

    std::vector<int> perm(n_sites);
    for (int layer = 0; layer < depth; ++layer) {
        std::vector<GateKind> single(n_sites);
        for (int i = 0; i < n_sites; ++i)
            single[i] = uniform_below(rng, 2) ? GateKind::s : GateKind::h;

        std::iota(perm.begin(), perm.end(), 0);
        for (int i = n_sites - 1; i > 0; --i)
            std::swap(perm[i], perm[uniform_below(rng, i + 1)]);

        std::vector<std::pair<int, int>> pairs;
        std::vector<int> partner(n_sites, -1);
        for (int p = 0; p + 1 < n_sites; p += 2) {
            if (!uniform_below(rng, 2)) continue;
            pairs.emplace_back(perm[p], perm[p + 1]);
            partner[perm[p]] = perm[p + 1];
            partner[perm[p + 1]] = perm[p];
        }

        const double t_draw = uniform_unit(rng);
        const int t_site = static_cast<int>(uniform_below(rng, n_sites));

        CircuitLayer gates;
        for (int i = 0; i < n_sites; ++i)
            if (partner[i] < 0) gates.push_back({single[i], i, -1});
        for (const auto& [c, t] : pairs) gates.push_back({GateKind::cx, c, t});
        if (t_draw < p_t) gates.push_back({GateKind::t, t_site, -1});
        inst.layers.push_back(std::move(gates));
    }
    return inst;
}

PauliSum::PauliSum(const PauliString& initial, double coefficient)
    : n_sites_(initial.n_sites) {
    if (initial.phase_quadrant % 2 != 0)
        throw std::invalid_argument("PauliSum: initial string must be Hermitian");
    const double sign = initial.phase_quadrant == 2 ? -1.0 : 1.0;
    terms_[{initial.x_mask, initial.z_mask}] = sign * coefficient;
}

std::uint64_t PauliSum::site_bit(int site) const {
    return std::uint64_t(1) << (n_sites_ - 1 - site);
}

double PauliSum::coefficient(std::uint64_t x_mask, std::uint64_t z_mask) const {
    const auto it = terms_.find({x_mask, z_mask});
    return it == terms_.end() ? 0.0 : it->second;
}

double PauliSum::norm2() const {
    double total = 0;
    for (const auto& [mask, c] : terms_) total += c * c;
    return total;
}

void PauliSum::conjugate(const Gate& g) {
    check_gate(g, n_sites_);
    const std::uint64_t bit = site_bit(g.site);
    TermMap out;
    out.reserve(terms_.size() * (g.kind == GateKind::t ? 2 : 1));

    switch (g.kind) {
        case GateKind::h:  // X <-> Z, Y -> -Y
            for (const auto& [m, c] : terms_) {
                const bool xb = m.x & bit, zb = m.z & bit;
                Mask nm{(m.x & ~bit) | (zb ? bit : 0), (m.z & ~bit) | (xb ? bit : 0)};
                out.emplace(nm, (xb && zb) ? -c : c);
            }
            break;
        case GateKind::s:  // X -> -Y, Y -> X
            for (const auto& [m, c] : terms_) {
                if (!(m.x & bit)) {
                    out.emplace(m, c);
                    continue;
                }
                out.emplace(Mask{m.x, m.z ^ bit}, (m.z & bit) ? c : -c);
            }
            break;
        case GateKind::cx: {  // X_c -> X_c X_t, Z_t -> Z_c Z_t
            const std::uint64_t bc = bit, bt = site_bit(g.target);
            for (const auto& [m, c] : terms_) {
                const bool xc = m.x & bc, zc = m.z & bc;
                const bool xt = m.x & bt, zt = m.z & bt;
                Mask nm{xc ? m.x ^ bt : m.x, zt ? m.z ^ bc : m.z};
                out.emplace(nm, (xc && zt && xt == zc) ? -c : c);
            }
            break;
        }
        case GateKind::t:  // X -> (X - Y)/sqrt(2), Y -> (X + Y)/sqrt(2)
            for (const auto& [m, c] : terms_) {
                if (!(m.x & bit)) {
                    out[m] += c;
                    continue;
                }
                const double r = c * kInvSqrt2;
                if (m.z & bit) {
                    out[Mask{m.x, m.z & ~bit}] += r;
                    out[m] += r;
                } else {
                    out[m] += r;
                    out[Mask{m.x, m.z | bit}] -= r;
                }
                if (out.size() > kMaxTerms) throw capacity_error("PauliSum: term capacity");
            }
            for (auto it = out.begin(); it != out.end();)
                it = it->second == 0.0 ? out.erase(it) : std::next(it);
            break;
    }
    terms_ = std::move(out);
}

void PauliSum::conjugate(const CircuitLayer& layer) {
    for (const Gate& g : layer) conjugate(g);
}

PauliSum conjugate(const PauliSum& sum, const Gate& gate) {
    PauliSum out = sum;
    out.conjugate(gate);
    return out;
}

OperatorDistribution PauliSum::weight_distribution() const {
    if (terms_.empty()) throw contract_violation("PauliSum: no terms");
    double total = 0, identity2 = 0;
    RealVector p = RealVector::Zero(n_sites_);
    for (const auto& [m, c] : terms_) {
        const std::uint64_t support = m.x | m.z;
        if (support == 0) {
            identity2 += c * c;
            continue;
        }
        p(std::popcount(support) - 1) += c * c;
        total += c * c;
    }
    if (total <= 0.0 || identity2 > 1e-20 * (total + identity2))
        throw contract_violation("PauliSum: operator is not traceless");
    OperatorDistribution dist;
    dist.basis = ClassBasis::pauli_weight;
    dist.n_sites = n_sites_;
    dist.p = p / total;
    return dist;
}

CircuitRun run_circuit_experiment(const CircuitInstance& inst, int initial_site,
                                  char initial_axis) {
    if (inst.n_sites < 1 || inst.n_sites > 64)
        throw std::invalid_argument("run_circuit_experiment: bad instance");
    if (initial_site < 1 || initial_site > inst.n_sites)
        throw std::invalid_argument("run_circuit_experiment: initial site out of range");

    CircuitRun run;
    run.instance = inst;
    PauliSum sum(single_site_pauli(inst.n_sites, initial_site - 1, initial_axis));

    const auto record = [&](double layer) {
        run.distributions.push_back(layer, sum.weight_distribution());
        run.term_counts.push_back(sum.term_count());
        run.norm2.push_back(sum.norm2());
    };
    record(0.0);
    for (std::size_t layer = 0; layer < inst.layers.size(); ++layer) {
        sum.conjugate(inst.layers[layer]);
        record(double(layer + 1));
    }
    return run;
}

TimeSeries<OperatorDistribution> ensemble_average(const std::vector<CircuitRun>& runs) {
    if (runs.empty()) throw std::invalid_argument("ensemble_average: no runs");
    const auto& first = runs.front().distributions;
    for (const auto& run : runs) {
        const auto& d = run.distributions;
        if (d.times != first.times || run.instance.n_sites != runs.front().instance.n_sites)
            throw std::invalid_argument("ensemble_average: runs have mismatched shape");
    }
    TimeSeries<OperatorDistribution> avg;
    avg.times = first.times;
    avg.values.reserve(first.values.size());
    for (std::size_t t = 0; t < first.values.size(); ++t) {
        OperatorDistribution d = first.values[t];
        for (std::size_t r = 1; r < runs.size(); ++r) d.p += runs[r].distributions.values[t].p;
        d.p /= double(runs.size());
        avg.values.push_back(std::move(d));
    }
    return avg;
}

CircuitEnsemble run_circuit_ensemble(const CircuitEnsembleConfig& config) {
    if (config.n_instances < 1)
        throw std::invalid_argument("run_circuit_ensemble: need at least one instance");
    CircuitEnsemble e;
    e.runs.reserve(config.n_instances);
    for (int i = 0; i < config.n_instances; ++i) {
        const auto inst = sample_circuit(config.n_sites, config.depth, config.p_t,
                                         derive_seed(config.seed, i));
        e.runs.push_back(
            run_circuit_experiment(inst, config.initial_site, config.initial_axis));
    }
    e.averaged = ensemble_average(e.runs);
    return e;
}

}  // namespace scramble
