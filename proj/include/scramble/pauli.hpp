#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scramble/common.hpp"

namespace scramble {

// An n-site Pauli string stored in symplectic form. Bit b of the masks is
// site n_sites-1-b, so site 0 is the leftmost letter of the printed string
// and the most significant bit of a basis index. Per site, (x,z) encodes
// I=(0,0) X=(1,0) Y=(1,1) Z=(0,1). The whole string carries a global phase
// i^phase_quadrant in front of the plain letter product, which keeps letter
// strings (quadrant 0) Hermitian.
struct PauliString {
    int n_sites = 0;
    std::uint64_t x_mask = 0;
    std::uint64_t z_mask = 0;
    std::uint8_t phase_quadrant = 0;

    PauliString() = default;
    PauliString(int n, std::uint64_t x, std::uint64_t z, std::uint8_t quadrant = 0);

    static PauliString identity(int n) { return PauliString(n, 0, 0, 0); }

    int weight() const;
    bool is_identity() const { return x_mask == 0 && z_mask == 0; }

    bool commutes(const PauliString& other) const;

    std::string to_string() const;

    friend bool operator==(const PauliString&, const PauliString&) = default;
};

PauliString multiply(const PauliString& a, const PauliString& b);

// 0 when the strings commute, pi when they anticommute: PQ = e^{i phi} QP.
double commutation_phase(const PauliString& a, const PauliString& b);

// Letter string with `axis` in {'x','y','z'} at 0-based `site`, identity
// elsewhere.
PauliString single_site_pauli(int n_sites, int site, char axis);

// Dense 2^n x 2^n matrix. With normalized=true each site carries 1/sqrt(2),
// so Tr(P^dag P) = 1. Guarded to n_sites <= 14.
Matrix dense_matrix(const PauliString& p, bool normalized);

// All C(n,k) 3^k letter strings of weight k, quadrant 0. Site combinations
// in lexicographic order, letters in X<Y<Z order with the last site of the
// combination varying fastest.
std::vector<PauliString> enumerate_weight_class(int n_sites, int k);

// Inverse of PauliString::to_string. Accepts an optional phase prefix from
// {+1, +i, -1, -i} separated by '·' or '*', with '-' or '−' as the
// minus sign, e.g. "-i·IYX" or bare "IYX".
PauliString parse_pauli(const std::string& text);

}  // namespace scramble
