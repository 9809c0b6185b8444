#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "scramble/pauli.hpp"
#include "test_util.hpp"

using namespace scramble;

TEST_CASE("single letter products match the algebra") {
    // X*Y = iZ and friends, checked against the dense 2x2 oracle for all
    // sixteen ordered letter pairs.
    const std::string letters = "IXYZ";
    for (char a : letters) {
        for (char b : letters) {
            const PauliString pa = parse_pauli(std::string(1, a));
            const PauliString pb = parse_pauli(std::string(1, b));
            const PauliString prod = multiply(pa, pb);
            CHECK(oracle::max_diff(oracle::pauli_matrix(prod),
                                   oracle::pauli_matrix(pa) * oracle::pauli_matrix(pb)) ==
                  doctest::Approx(0.0).epsilon(1e-15));
        }
    }
    const PauliString xy = multiply(parse_pauli("X"), parse_pauli("Y"));
    CHECK(xy.phase_quadrant == 1);
    CHECK(xy.to_string() == "+i\xc2\xb7Z");
}

TEST_CASE("multiplication against the Kronecker oracle, n <= 4") {
    Rng rng(2024);
    for (int n = 1; n <= 4; ++n) {
        for (int trial = 0; trial < 60; ++trial) {
            const PauliString a = oracle::random_pauli(n, rng);
            const PauliString b = oracle::random_pauli(n, rng);
            const Matrix expect = oracle::pauli_matrix(a) * oracle::pauli_matrix(b);
            CHECK(oracle::max_diff(oracle::pauli_matrix(multiply(a, b)), expect) < 1e-14);
        }
    }
}

TEST_CASE("multiplication is associative and inverts") {
    Rng rng(7);
    for (int trial = 0; trial < 80; ++trial) {
        const PauliString a = oracle::random_pauli(4, rng);
        const PauliString b = oracle::random_pauli(4, rng);
        const PauliString c = oracle::random_pauli(4, rng);
        CHECK(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
        // letter strings square to the identity
        const PauliString h = oracle::random_pauli(4, rng, false);
        CHECK(multiply(h, h) == PauliString::identity(4));
    }
}

TEST_CASE("commutation phase matches the dense commutator") {
    Rng rng(11);
    const double pi = 3.14159265358979323846;
    for (int n = 1; n <= 4; ++n) {
        for (int trial = 0; trial < 60; ++trial) {
            const PauliString a = oracle::random_pauli(n, rng);
            const PauliString b = oracle::random_pauli(n, rng);
            const Matrix ma = oracle::pauli_matrix(a), mb = oracle::pauli_matrix(b);
            const double comm = oracle::max_diff(ma * mb, mb * ma);
            const double anti = oracle::max_diff(ma * mb, -mb * ma);
            if (commutation_phase(a, b) == 0.0) {
                CHECK(comm < 1e-14);
            } else {
                CHECK(commutation_phase(a, b) == doctest::Approx(pi));
                CHECK(anti < 1e-14);
            }
        }
    }
    CHECK(commutation_phase(parse_pauli("X"), parse_pauli("Y")) == doctest::Approx(pi));
    CHECK(commutation_phase(parse_pauli("XX"), parse_pauli("YY")) == 0.0);
}

TEST_CASE("weight counts non-identity sites") {
    CHECK(parse_pauli("IXY").weight() == 2);
    CHECK(parse_pauli("IZI").weight() == 1);
    CHECK(parse_pauli("III").weight() == 0);
    CHECK(PauliString::identity(5).weight() == 0);
    CHECK(parse_pauli("YYYY").weight() == 4);
}

TEST_CASE("dense matrices match the oracle and normalization") {
    Rng rng(23);
    for (int n = 1; n <= 4; ++n) {
        for (int trial = 0; trial < 30; ++trial) {
            const PauliString p = oracle::random_pauli(n, rng);
            CHECK(oracle::max_diff(dense_matrix(p, false), oracle::pauli_matrix(p)) < 1e-14);
            const Matrix norm = dense_matrix(p, true);
            CHECK(std::abs(hs_inner(norm, norm)) == doctest::Approx(1.0).epsilon(1e-13));
        }
    }
    CHECK_THROWS_AS(dense_matrix(PauliString::identity(15), false), capacity_error);
}

TEST_CASE("weight class enumeration: sizes, uniqueness, order") {
    for (int n = 1; n <= 6; ++n) {
        double binom = 1.0, three = 1.0;
        std::size_t total = 0;
        for (int k = 1; k <= n; ++k) {
            binom *= double(n - k + 1) / k;
            three *= 3.0;
            const auto cls = enumerate_weight_class(n, k);
            CHECK(cls.size() == std::size_t(binom * three + 0.5));
            total += cls.size();
            std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
            for (const auto& p : cls) {
                CHECK(p.weight() == k);
                CHECK(p.phase_quadrant == 0);
                seen.insert({p.x_mask, p.z_mask});
            }
            CHECK(seen.size() == cls.size());
        }
        // the classes tile everything except the identity
        CHECK(total == (std::size_t{1} << (2 * n)) - 1);
    }

    const auto c32 = enumerate_weight_class(3, 2);
    REQUIRE(c32.size() == 27);
    CHECK(c32[0].to_string() == "XXI");
    CHECK(c32[1].to_string() == "XYI");
    CHECK(c32[2].to_string() == "XZI");
    CHECK(c32[3].to_string() == "YXI");
    CHECK(c32[9].to_string() == "XIX");
    CHECK(c32.back().to_string() == "IZZ");

    CHECK_THROWS_AS(enumerate_weight_class(3, 0), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_weight_class(3, 4), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_weight_class(40, 20), capacity_error);
}

TEST_CASE("string round trip and parsing") {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + int(uniform_below(rng, 6));
        const PauliString p = oracle::random_pauli(n, rng);
        CHECK(parse_pauli(p.to_string()) == p);
    }
    CHECK(parse_pauli("IYX") == PauliString(3, 0b011, 0b010, 0));
    // unicode minus and middle dot, as well as ascii forms
    CHECK(parse_pauli("\xe2\x88\x92i\xc2\xb7IYX").phase_quadrant == 3);
    CHECK(parse_pauli("-i*IYX").phase_quadrant == 3);
    CHECK(parse_pauli("+1*ZZ") == PauliString(2, 0, 0b11, 0));
    CHECK(parse_pauli("+i\xc2\xb7X").phase_quadrant == 1);

    CHECK_THROWS_AS(parse_pauli(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_pauli("ABC"), std::invalid_argument);
    CHECK_THROWS_AS(parse_pauli("+2\xc2\xb7XX"), std::invalid_argument);
    CHECK_THROWS_AS(parse_pauli("-iXX"), std::invalid_argument);
    CHECK_THROWS_AS(parse_pauli("xyz"), std::invalid_argument);
}

TEST_CASE("mask guards") {
    CHECK_THROWS_AS(PauliString(0, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(PauliString(2, 0b100, 0), std::invalid_argument);
    CHECK_THROWS_AS(single_site_pauli(4, 4, 'x'), std::invalid_argument);
    CHECK_THROWS_AS(single_site_pauli(4, 0, 'w'), std::invalid_argument);
}
