#include "scramble/chaos.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scramble {

double gap_ratio(const std::vector<double>& levels, bool* degenerate) {
    if (degenerate) *degenerate = false;
    if (levels.size() < 4)
        throw std::invalid_argument("gap_ratio: need at least 4 levels");
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (levels[i] < levels[i - 1])
            throw std::invalid_argument("gap_ratio: levels must be sorted ascending");

    const std::size_t n_gaps = levels.size() - 1;
    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < n_gaps; ++j) {
        const double a = levels[j + 1] - levels[j];
        const double b = levels[j + 2] - levels[j + 1];
        const double lo = std::min(a, b);
        const double hi = std::max(a, b);
        if (lo == 0.0) {
            if (degenerate) *degenerate = true;
            continue;  // ratio 0
        }
        sum += lo / hi;
    }
    return sum / double(n_gaps - 1);
}

double floquet_gap_ratio(const Matrix& u, bool* degenerate) {
    if (u.rows() != u.cols() || u.rows() < 3)
        throw std::invalid_argument("floquet_gap_ratio: need a square unitary of dimension >= 3");
    const Eigen::Index d = u.rows();
    const double unitarity = max_abs(Matrix(u.adjoint() * u) - Matrix::Identity(d, d));
    if (unitarity > 1e-10)
        throw contract_violation("floquet_gap_ratio: matrix is not unitary");

    Eigen::ComplexEigenSolver<Matrix> solver(u, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("floquet_gap_ratio: eigenvalue computation failed");

    std::vector<double> phases(static_cast<std::size_t>(d));
    for (Eigen::Index i = 0; i < d; ++i)
        phases[static_cast<std::size_t>(i)] = std::arg(solver.eigenvalues()(i));
    std::sort(phases.begin(), phases.end());
    phases.push_back(phases.front() + 2.0 * M_PI);  // wrap-around gap
    return gap_ratio(phases, degenerate);
}

double normalize_gap_ratio(double r_bar, SpectralEnsemble reference) {
    double ref = 0.0;
    switch (reference) {
        case SpectralEnsemble::goe: ref = kGapRatioGoe; break;
        case SpectralEnsemble::cue: ref = kGapRatioCue; break;
        case SpectralEnsemble::poisson:
            throw std::invalid_argument("normalize_gap_ratio: reference must be goe or cue");
    }
    return (r_bar - kGapRatioPoisson) / (ref - kGapRatioPoisson);
}

double sector_weighted_gap_ratio(const std::vector<std::vector<double>>& sector_levels,
                                 bool* degenerate) {
    if (degenerate) *degenerate = false;
    if (sector_levels.empty())
        throw std::invalid_argument("sector_weighted_gap_ratio: no sectors");
    double weighted = 0.0;
    double total = 0.0;
    for (const auto& levels : sector_levels) {
        bool flag = false;
        const double r = gap_ratio(levels, &flag);
        if (flag && degenerate) *degenerate = true;
        weighted += double(levels.size()) * r;
        total += double(levels.size());
    }
    return weighted / total;
}

std::vector<double> sample_poisson_levels(int count, Rng& rng) {
    if (count < 1) throw std::invalid_argument("sample_poisson_levels: count must be positive");
    std::vector<double> levels(static_cast<std::size_t>(count));
    double x = 0.0;
    for (int i = 0; i < count; ++i) {
        x += -std::log1p(-uniform_unit(rng));
        levels[static_cast<std::size_t>(i)] = x;
    }
    return levels;
}

RealMatrix sample_goe(int dim, Rng& rng) {
    if (dim < 2) throw std::invalid_argument("sample_goe: dim must be at least 2");
    RealMatrix a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = gaussian(rng);
    return 0.5 * (a + a.transpose());
}

double bipartite_entropy(const Vector& state, int n_sites) {
    if (n_sites < 2 || n_sites % 2 != 0)
        throw std::invalid_argument("bipartite_entropy: n_sites must be even and >= 2");
    const Eigen::Index d = Eigen::Index(1) << n_sites;
    if (state.size() != d)
        throw std::invalid_argument("bipartite_entropy: state dimension mismatch");
    const Eigen::Index da = Eigen::Index(1) << (n_sites / 2);

    // Site 0 is the most significant bit, so the first half of the chain
    // indexes the row of the reshaped amplitude matrix.
    Eigen::Map<const Eigen::Matrix<complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        psi(state.data(), da, da);
    Eigen::JacobiSVD<Matrix> svd(psi);
    const auto& s = svd.singularValues();
    const double total = s.squaredNorm();
    if (total <= 0.0) throw std::invalid_argument("bipartite_entropy: zero state");
    double entropy = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        const double p = s(i) * s(i) / total;
        if (p > 0.0) entropy -= p * std::log(p);
    }
    return entropy;
}

double bulk_entanglement_entropy(const Matrix& h, int n_sites, double bulk_fraction) {
    if (n_sites < 2 || n_sites % 2 != 0)
        throw std::invalid_argument("bulk_entanglement_entropy: n_sites must be even and >= 2");
    const Eigen::Index d = Eigen::Index(1) << n_sites;
    if (h.rows() != d || h.cols() != d)
        throw std::invalid_argument("bulk_entanglement_entropy: dimension mismatch");
    if (!(bulk_fraction > 0.0 && bulk_fraction <= 1.0))
        throw std::invalid_argument("bulk_entanglement_entropy: bulk_fraction must be in (0, 1]");
    if (!is_hermitian(h, 1e-8))
        throw contract_violation("bulk_entanglement_entropy: matrix is not Hermitian");

    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("bulk_entanglement_entropy: eigendecomposition failed");

    Eigen::Index keep = Eigen::Index(std::lround(bulk_fraction * double(d)));
    keep = std::max<Eigen::Index>(1, std::min(keep, d));
    const Eigen::Index start = (d - keep) / 2;

    double sum = 0.0;
    for (Eigen::Index i = 0; i < keep; ++i)
        sum += bipartite_entropy(solver.eigenvectors().col(start + i), n_sites);
    return sum / double(keep);
}

namespace {

std::uint64_t reverse_bits(std::uint64_t b, int n_bits) {
    std::uint64_t r = 0;
    for (int i = 0; i < n_bits; ++i) {
        r = (r << 1) | (b & 1u);
        b >>= 1;
    }
    return r;
}

}  // namespace

SectorBlocks reflection_desymmetrize(const Matrix& h, int n_sites) {
    if (n_sites < 1 || n_sites > 20)
        throw std::invalid_argument("reflection_desymmetrize: n_sites out of range");
    const Eigen::Index d = Eigen::Index(1) << n_sites;
    if (h.rows() != d || h.cols() != d)
        throw std::invalid_argument("reflection_desymmetrize: dimension mismatch");

    std::vector<Eigen::Index> rev(static_cast<std::size_t>(d));
    for (Eigen::Index b = 0; b < d; ++b)
        rev[static_cast<std::size_t>(b)] =
            Eigen::Index(reverse_bits(std::uint64_t(b), n_sites));

    const double scale = std::max(1.0, max_abs(h));
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            if (std::abs(h(i, rev[std::size_t(j)]) - h(rev[std::size_t(i)], j)) > 1e-10 * scale)
                throw contract_violation(
                    "reflection_desymmetrize: matrix does not commute with reflection");

    // Orbit basis: fixed points go to the even sector, each pair {b, rev(b)}
    // contributes (e_b + e_rev)/sqrt(2) to even and (e_b - e_rev)/sqrt(2) to odd.
    struct OrbitVector {
        Eigen::Index a;
        Eigen::Index b;   // == a for fixed points
        double sign;      // weight of e_b relative to e_a
    };
    std::vector<OrbitVector> even, odd;
    for (Eigen::Index b = 0; b < d; ++b) {
        const Eigen::Index r = rev[static_cast<std::size_t>(b)];
        if (r == b)
            even.push_back({b, b, 0.0});
        else if (b < r) {
            even.push_back({b, r, 1.0});
            odd.push_back({b, r, -1.0});
        }
    }

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    auto assemble = [&](const std::vector<OrbitVector>& basis) {
        const Eigen::Index m = Eigen::Index(basis.size());
        Matrix block(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            const auto& vi = basis[static_cast<std::size_t>(i)];
            const double wi = (vi.sign == 0.0) ? 1.0 : inv_sqrt2;
            for (Eigen::Index j = 0; j < m; ++j) {
                const auto& vj = basis[static_cast<std::size_t>(j)];
                const double wj = (vj.sign == 0.0) ? 1.0 : inv_sqrt2;
                complex acc = h(vi.a, vj.a);
                if (vj.sign != 0.0) acc += vj.sign * h(vi.a, vj.b);
                if (vi.sign != 0.0) {
                    acc += vi.sign * h(vi.b, vj.a);
                    if (vj.sign != 0.0) acc += vi.sign * vj.sign * h(vi.b, vj.b);
                }
                block(i, j) = wi * wj * acc;
            }
        }
        return block;
    };

    return {assemble(even), assemble(odd)};
}

}  // namespace scramble
