#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "scramble/clifford.hpp"
#include "scramble/operator_space.hpp"
#include "test_util.hpp"

using namespace scramble;

namespace oracle {

// dense gate builders, independent of the library's conjugation tables
inline Matrix gate_matrix_1q(GateKind kind) {
    Matrix m(2, 2);
    const complex i{0, 1};
    switch (kind) {
        case GateKind::h: m << 1, 1, 1, -1; m /= std::sqrt(2.0); break;
        case GateKind::s: m << 1, 0, 0, i; break;
        case GateKind::t: m << 1, 0, 0, std::polar(1.0, std::acos(-1.0) / 4); break;
        default: throw std::invalid_argument("gate_matrix_1q");
    }
    return m;
}

inline Matrix gate_matrix(const Gate& g, int n) {
    const int dim = 1 << n;
    if (g.kind == GateKind::cx) {
        Matrix m = Matrix::Zero(dim, dim);
        const int bc = 1 << (n - 1 - g.site), bt = 1 << (n - 1 - g.target);
        for (int b = 0; b < dim; ++b) m((b & bc) ? b ^ bt : b, b) = 1;
        return m;
    }
    Matrix m = Matrix::Identity(1, 1);
    for (int site = 0; site < n; ++site)
        m = kron(m, site == g.site ? gate_matrix_1q(g.kind) : letter('I'));
    return m;
}

inline Matrix dense_of(const PauliSum& sum) {
    const int dim = 1 << sum.n_sites();
    Matrix m = Matrix::Zero(dim, dim);
    for (const auto& [mask, c] : sum.terms()) {
        const scramble::PauliString p(sum.n_sites(), mask.x, mask.z, 0);
        m += c * pauli_matrix(p, false);
    }
    return m;
}

}  // namespace oracle

TEST_CASE("sampled circuits: determinism, layer structure, T statistics") {
    const auto a = sample_circuit(6, 30, 0.4, 99);
    const auto b = sample_circuit(6, 30, 0.4, 99);
    REQUIRE(a.layers.size() == 30);
    CHECK(a.n_sites == 6);
    CHECK(a.p_t == 0.4);
    CHECK(a.seed == 99);
    for (std::size_t l = 0; l < a.layers.size(); ++l) {
        REQUIRE(a.layers[l].size() == b.layers[l].size());
        for (std::size_t g = 0; g < a.layers[l].size(); ++g) {
            CHECK(a.layers[l][g].kind == b.layers[l][g].kind);
            CHECK(a.layers[l][g].site == b.layers[l][g].site);
            CHECK(a.layers[l][g].target == b.layers[l][g].target);
        }
    }
    int total_t = 0;
    for (const auto& layer : a.layers) {
        std::set<int> covered;
        int t_in_layer = 0;
        for (const Gate& g : layer) {
            if (g.kind == GateKind::t) {
                ++t_in_layer;
                CHECK(&g == &layer.back());  // T comes after the Clifford gates
                CHECK(g.site >= 0);
                CHECK(g.site < 6);
                continue;
            }
            CHECK(covered.insert(g.site).second);
            if (g.kind == GateKind::cx) {
                CHECK(covered.insert(g.target).second);
                CHECK(g.site != g.target);
            }
        }
        CHECK(covered.size() == 6);  // Clifford part touches every site once
        CHECK(t_in_layer <= 1);
        total_t += t_in_layer;
    }
    CHECK(total_t > 0);
    CHECK(total_t < 30);

    // same seed => same Clifford backbone, whatever p_t gates the T draws
    const auto lo = sample_circuit(6, 30, 0.1, 99);
    const auto hi = sample_circuit(6, 30, 0.9, 99);
    for (std::size_t l = 0; l < lo.layers.size(); ++l) {
        const auto strip = [](const CircuitLayer& layer) {
            CircuitLayer cliffords;
            for (const Gate& g : layer)
                if (g.kind != GateKind::t) cliffords.push_back(g);
            return cliffords;
        };
        const auto cl = strip(lo.layers[l]), ch = strip(hi.layers[l]);
        REQUIRE(cl.size() == ch.size());
        for (std::size_t g = 0; g < cl.size(); ++g) {
            CHECK(cl[g].kind == ch[g].kind);
            CHECK(cl[g].site == ch[g].site);
            CHECK(cl[g].target == ch[g].target);
        }
        const bool lo_t = lo.layers[l].back().kind == GateKind::t;
        const bool hi_t = hi.layers[l].back().kind == GateKind::t;
        CHECK(hi_t >= lo_t);  // the same draw fires at 0.9 whenever it fires at 0.1
        if (lo_t) CHECK(lo.layers[l].back().site == hi.layers[l].back().site);
    }

    const auto none = sample_circuit(5, 50, 0.0, 7);
    for (const auto& layer : none.layers)
        for (const Gate& g : layer) CHECK(g.kind != GateKind::t);

    const auto always = sample_circuit(5, 50, 1.0, 7);
    for (const auto& layer : always.layers) {
        int t_count = 0;
        for (const Gate& g : layer) t_count += g.kind == GateKind::t;
        CHECK(t_count == 1);
        CHECK(layer.back().kind == GateKind::t);
    }

    CHECK_THROWS_AS(sample_circuit(0, 5, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_circuit(65, 5, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_circuit(4, -1, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_circuit(4, 5, 1.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_circuit(4, 5, -0.1, 1), std::invalid_argument);
}

TEST_CASE("single-letter conjugation tables") {
    const auto term = [](const PauliSum& s, std::uint64_t x, std::uint64_t z) {
        return s.coefficient(x, z);
    };
    const double r = 1 / std::sqrt(2.0);

    // H: X <-> Z, Y -> -Y
    PauliSum sx(parse_pauli("X"));
    sx.conjugate({GateKind::h, 0, -1});
    CHECK(term(sx, 0, 1) == 1.0);
    PauliSum sy(parse_pauli("Y"));
    sy.conjugate({GateKind::h, 0, -1});
    CHECK(term(sy, 1, 1) == -1.0);

    // S: X -> -Y, Y -> X, Z -> Z
    sx = PauliSum(parse_pauli("X"));
    sx.conjugate({GateKind::s, 0, -1});
    CHECK(term(sx, 1, 1) == -1.0);
    sy = PauliSum(parse_pauli("Y"));
    sy.conjugate({GateKind::s, 0, -1});
    CHECK(term(sy, 1, 0) == 1.0);
    PauliSum sz(parse_pauli("Z"));
    sz.conjugate({GateKind::s, 0, -1});
    CHECK(term(sz, 0, 1) == 1.0);

    // T: X -> (X - Y)/sqrt(2), Y -> (X + Y)/sqrt(2), Z -> Z
    sx = PauliSum(parse_pauli("X"));
    sx.conjugate({GateKind::t, 0, -1});
    CHECK(sx.term_count() == 2);
    CHECK(term(sx, 1, 0) == doctest::Approx(r).epsilon(1e-15));
    CHECK(term(sx, 1, 1) == doctest::Approx(-r).epsilon(1e-15));
    sy = PauliSum(parse_pauli("Y"));
    sy.conjugate({GateKind::t, 0, -1});
    CHECK(term(sy, 1, 0) == doctest::Approx(r).epsilon(1e-15));
    CHECK(term(sy, 1, 1) == doctest::Approx(r).epsilon(1e-15));
    sz = PauliSum(parse_pauli("Z"));
    sz.conjugate({GateKind::t, 0, -1});
    CHECK(term(sz, 0, 1) == 1.0);

    // CX homomorphism: X(c) -> X(c)X(t), Z(t) -> Z(c)Z(t), sign on X(c)Z(t)
    PauliSum xi(parse_pauli("XI"));
    xi.conjugate({GateKind::cx, 0, 1});
    CHECK(term(xi, 0b11, 0b00) == 1.0);
    PauliSum iz(parse_pauli("IZ"));
    iz.conjugate({GateKind::cx, 0, 1});
    CHECK(term(iz, 0b00, 0b11) == 1.0);
    PauliSum ix(parse_pauli("IX"));
    ix.conjugate({GateKind::cx, 0, 1});
    CHECK(term(ix, 0b01, 0b00) == 1.0);
    PauliSum zi(parse_pauli("ZI"));
    zi.conjugate({GateKind::cx, 0, 1});
    CHECK(term(zi, 0b00, 0b10) == 1.0);
    PauliSum xz(parse_pauli("XZ"));
    xz.conjugate({GateKind::cx, 0, 1});
    CHECK(term(xz, 0b11, 0b11) == -1.0);  // -YY
    PauliSum yy(parse_pauli("YY"));
    yy.conjugate({GateKind::cx, 0, 1});
    CHECK(term(yy, 0b10, 0b01) == -1.0);  // -XZ
}

TEST_CASE("conjugation matches the dense oracle for every gate kind") {
    Rng rng(314);
    for (int n : {1, 2, 3}) {
        std::vector<Gate> gates;
        for (int s = 0; s < n; ++s) {
            gates.push_back({GateKind::h, s, -1});
            gates.push_back({GateKind::s, s, -1});
            gates.push_back({GateKind::t, s, -1});
        }
        for (int c = 0; c < n; ++c)
            for (int t = 0; t < n; ++t)
                if (c != t) gates.push_back({GateKind::cx, c, t});

        for (const Gate& g : gates) {
            for (int trial = 0; trial < 4; ++trial) {
                const auto p = oracle::random_pauli(n, rng, false);
                PauliSum sum(p);
                sum.conjugate(g);
                const Matrix u = oracle::gate_matrix(g, n);
                const Matrix want = u.adjoint() * oracle::pauli_matrix(p, false) * u;
                CHECK(oracle::max_diff(oracle::dense_of(sum), want) <= 1e-12);
                CHECK(sum.norm2() == doctest::Approx(1.0).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("pauli sums: construction, bookkeeping, and contracts") {
    PauliSum sum(single_site_pauli(4, 2, 'y'));
    CHECK(sum.n_sites() == 4);
    CHECK(sum.term_count() == 1);
    CHECK(sum.norm2() == 1.0);
    CHECK(sum.coefficient(0b0010, 0b0010) == 1.0);
    CHECK(sum.coefficient(0b0010, 0b0000) == 0.0);

    // a -1 phase folds into the coefficient; +/- i is rejected
    PauliSum neg(PauliString(2, 0b01, 0b00, 2), 3.0);
    CHECK(neg.coefficient(0b01, 0b00) == -3.0);
    CHECK_THROWS_AS(PauliSum(PauliString(2, 0b01, 0b00, 1)), std::invalid_argument);

    const auto dist = sum.weight_distribution();
    CHECK(dist.basis == ClassBasis::pauli_weight);
    CHECK(dist.at(1) == 1.0);
    CHECK(measures(dist).ipr == 1.0);

    PauliSum id(PauliString(3, 0, 0, 0));
    CHECK_THROWS_AS(id.weight_distribution(), contract_violation);

    CHECK_THROWS_AS(sum.conjugate(Gate{GateKind::h, 4, -1}), std::invalid_argument);
    CHECK_THROWS_AS(sum.conjugate(Gate{GateKind::cx, 0, 4}), std::invalid_argument);
    CHECK_THROWS_AS(sum.conjugate(Gate{GateKind::cx, 2, 2}), std::invalid_argument);

    const PauliSum rotated = conjugate(sum, Gate{GateKind::h, 2, -1});
    CHECK(rotated.coefficient(0b0010, 0b0010) == -1.0);
    CHECK(sum.coefficient(0b0010, 0b0010) == 1.0);  // free function copies
}

TEST_CASE("norm conservation and term growth bound") {
    const auto inst = sample_circuit(5, 40, 0.6, 2024);
    PauliSum sum(single_site_pauli(5, 0, 'z'));
    int t_gates = 0;
    for (const auto& layer : inst.layers) {
        for (const Gate& g : layer) {
            const double before = sum.norm2();
            sum.conjugate(g);
            CHECK(std::abs(sum.norm2() - before) <= 1e-12);
            if (g.kind == GateKind::t) ++t_gates;
            const double bound = t_gates < 60 ? std::pow(2.0, t_gates) : 1e18;
            CHECK(double(sum.term_count()) <= bound);
        }
    }
    CHECK(sum.norm2() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("circuit runs agree with the dense pipeline") {
    for (double p_t : {0.0, 0.5, 1.0}) {
        for (int n : {2, 3}) {
            const auto inst = sample_circuit(n, 6, p_t, 5150 + n);
            const auto run = run_circuit_experiment(inst, 1, 'z');
            REQUIRE(run.distributions.times.size() == 7);

            Matrix op = dense_matrix(single_site_pauli(n, 0, 'z'), true);
            Matrix u = Matrix::Identity(1 << n, 1 << n);
            for (std::size_t l = 0; l < inst.layers.size(); ++l) {
                for (const Gate& g : inst.layers[l]) u = u * oracle::gate_matrix(g, n);
                const Matrix evolved = u.adjoint() * op * u;
                const auto dense_dist =
                    weight_distribution(evolved, n, DecompositionPath::direct);
                const auto& sum_dist = run.distributions.values[l + 1];
                CHECK((dense_dist.p - sum_dist.p).cwiseAbs().maxCoeff() <= 1e-12);
            }
        }
    }
}

TEST_CASE("quasi-scrambling: clifford-only circuits keep a single term") {
    const auto inst = sample_circuit(6, 40, 0.0, 31337);
    const auto run = run_circuit_experiment(inst, 3, 'y');
    REQUIRE(run.term_counts.size() == 41);
    for (std::size_t l = 0; l < run.term_counts.size(); ++l) {
        CHECK(run.term_counts[l] == 1);
        CHECK(run.norm2[l] == 1.0);
        CHECK(measures(run.distributions.values[l]).ipr == 1.0);
    }
    CHECK(run.distributions.values.front().at(1) == 1.0);

    CHECK_THROWS_AS(run_circuit_experiment(inst, 0, 'z'), std::invalid_argument);
    CHECK_THROWS_AS(run_circuit_experiment(inst, 7, 'z'), std::invalid_argument);
}

TEST_CASE("ensemble averaging") {
    const auto r1 = run_circuit_experiment(sample_circuit(4, 8, 0.5, 1), 1, 'z');
    const auto r2 = run_circuit_experiment(sample_circuit(4, 8, 0.5, 2), 1, 'z');
    const auto r2b = run_circuit_experiment(sample_circuit(4, 8, 0.5, 2), 1, 'z');

    const auto only = ensemble_average({r1});
    for (std::size_t t = 0; t < only.values.size(); ++t)
        CHECK((only.values[t].p - r1.distributions.values[t].p).cwiseAbs().maxCoeff() == 0.0);

    const auto twin = ensemble_average({r2, r2b});
    for (std::size_t t = 0; t < twin.values.size(); ++t)
        CHECK((twin.values[t].p - r2.distributions.values[t].p).cwiseAbs().maxCoeff() == 0.0);

    const auto avg = ensemble_average({r1, r2});
    for (std::size_t t = 0; t < avg.values.size(); ++t) {
        const RealVector want =
            0.5 * (r1.distributions.values[t].p + r2.distributions.values[t].p);
        CHECK((avg.values[t].p - want).cwiseAbs().maxCoeff() <= 1e-16);
    }

    const auto shallow = run_circuit_experiment(sample_circuit(4, 5, 0.5, 3), 1, 'z');
    CHECK_THROWS_AS(ensemble_average({r1, shallow}), std::invalid_argument);
    const auto narrow = run_circuit_experiment(sample_circuit(3, 8, 0.5, 4), 1, 'z');
    CHECK_THROWS_AS(ensemble_average({r1, narrow}), std::invalid_argument);
    CHECK_THROWS_AS(ensemble_average({}), std::invalid_argument);
}

TEST_CASE("universal circuits equilibrate toward the haar profile") {
    CircuitEnsembleConfig config;
    config.n_sites = 6;
    config.depth = 40;
    config.p_t = 0.5;
    config.n_instances = 10;
    config.seed = 777;
    const auto ens = run_circuit_ensemble(config);
    REQUIRE(ens.runs.size() == 10);
    REQUIRE(ens.averaged.times.size() == 41);

    CHECK(ens.averaged.values.front().at(1) == 1.0);
    const auto late = measures(ens.averaged.values.back());
    CHECK(late.mean == doctest::Approx(4.5011).epsilon(0.10));

    // per-run IPR decays well below the localized value once T gates act
    double ipr_sum = 0;
    for (const auto& run : ens.runs) ipr_sum += measures(run.distributions.values.back()).ipr;
    CHECK(ipr_sum / 10 < 0.6);

    CHECK_THROWS_AS(
        [] {
            CircuitEnsembleConfig zero;
            zero.n_instances = 0;
            return run_circuit_ensemble(zero);
        }(),
        std::invalid_argument);
}
