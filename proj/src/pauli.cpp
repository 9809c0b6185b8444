#include "scramble/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace scramble {

namespace {

int popcount(std::uint64_t v) { return std::popcount(v); }

std::uint64_t site_bit(int n_sites, int site) {
    return std::uint64_t{1} << (n_sites - 1 - site);
}

char letter_of(bool x, bool z) {
    if (x && z) return 'Y';
    if (x) return 'X';
    if (z) return 'Z';
    return 'I';
}

}  // namespace

PauliString::PauliString(int n, std::uint64_t x, std::uint64_t z, std::uint8_t quadrant)
    : n_sites(n), x_mask(x), z_mask(z), phase_quadrant(quadrant & 3) {
    if (n < 1 || n > 64) throw std::invalid_argument("PauliString: n_sites must be in [1, 64]");
    const std::uint64_t valid = (n == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
    if ((x & ~valid) || (z & ~valid))
        throw std::invalid_argument("PauliString: mask bits outside n_sites");
}

int PauliString::weight() const { return popcount(x_mask | z_mask); }

bool PauliString::commutes(const PauliString& other) const {
    const int anti = popcount(x_mask & other.z_mask) + popcount(z_mask & other.x_mask);
    return (anti & 1) == 0;
}

PauliString multiply(const PauliString& a, const PauliString& b) {
    if (a.n_sites != b.n_sites)
        throw std::invalid_argument("multiply: mismatched n_sites");
    const std::uint64_t x = a.x_mask ^ b.x_mask;
    const std::uint64_t z = a.z_mask ^ b.z_mask;
    // letter(x,z) = i^{|x&z|} X^x Z^z; moving Z^za past X^xb costs (-1)^{|za & xb|}
    const int q = a.phase_quadrant + b.phase_quadrant + popcount(a.x_mask & a.z_mask) +
                  popcount(b.x_mask & b.z_mask) - popcount(x & z) +
                  2 * popcount(a.z_mask & b.x_mask);
    return PauliString(a.n_sites, x, z, static_cast<std::uint8_t>(((q % 4) + 4) % 4));
}

double commutation_phase(const PauliString& a, const PauliString& b) {
    if (a.n_sites != b.n_sites)
        throw std::invalid_argument("commutation_phase: mismatched n_sites");
    return a.commutes(b) ? 0.0 : 3.14159265358979323846;
}

PauliString single_site_pauli(int n_sites, int site, char axis) {
    if (site < 0 || site >= n_sites)
        throw std::invalid_argument("single_site_pauli: site out of range");
    const std::uint64_t bit = site_bit(n_sites, site);
    switch (axis) {
        case 'x': return PauliString(n_sites, bit, 0);
        case 'y': return PauliString(n_sites, bit, bit);
        case 'z': return PauliString(n_sites, 0, bit);
        default: throw std::invalid_argument("single_site_pauli: axis must be x, y or z");
    }
}

Matrix dense_matrix(const PauliString& p, bool normalized) {
    if (p.n_sites > 14)
        throw capacity_error("dense_matrix: n_sites > 14");
    const std::uint64_t dim = std::uint64_t{1} << p.n_sites;
    static const complex i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const complex front =
        i_pow[(p.phase_quadrant + popcount(p.x_mask & p.z_mask)) & 3] *
        (normalized ? std::pow(0.5, 0.5 * p.n_sites) : 1.0);
    Matrix m = Matrix::Zero(dim, dim);
    for (std::uint64_t col = 0; col < dim; ++col) {
        const double sign = (popcount(p.z_mask & col) & 1) ? -1.0 : 1.0;
        m(col ^ p.x_mask, col) = front * sign;
    }
    return m;
}

std::vector<PauliString> enumerate_weight_class(int n_sites, int k) {
    if (n_sites < 1 || n_sites > 64)
        throw std::invalid_argument("enumerate_weight_class: n_sites must be in [1, 64]");
    if (k < 1 || k > n_sites)
        throw std::invalid_argument("enumerate_weight_class: k must be in [1, n_sites]");
    double count = std::pow(3.0, k);
    for (int i = 0; i < k; ++i) count *= double(n_sites - i) / double(i + 1);
    if (count > double(1) * (1 << 26))
        throw capacity_error("enumerate_weight_class: class too large to materialize");

    std::vector<PauliString> out;
    out.reserve(static_cast<std::size_t>(count + 0.5));
    std::vector<int> sites(k);
    for (int i = 0; i < k; ++i) sites[i] = i;
    std::vector<int> letters(k);  // 0=X 1=Y 2=Z
    while (true) {
        std::fill(letters.begin(), letters.end(), 0);
        while (true) {
            std::uint64_t x = 0, z = 0;
            for (int i = 0; i < k; ++i) {
                const std::uint64_t bit = site_bit(n_sites, sites[i]);
                if (letters[i] != 2) x |= bit;  // X or Y
                if (letters[i] != 0) z |= bit;  // Y or Z
            }
            out.emplace_back(n_sites, x, z);
            int pos = k - 1;
            while (pos >= 0 && letters[pos] == 2) letters[pos--] = 0;
            if (pos < 0) break;
            ++letters[pos];
        }
        // next k-combination of {0..n-1} in lexicographic order
        int pos = k - 1;
        while (pos >= 0 && sites[pos] == n_sites - k + pos) --pos;
        if (pos < 0) break;
        ++sites[pos];
        for (int i = pos + 1; i < k; ++i) sites[i] = sites[i - 1] + 1;
    }
    return out;
}

std::string PauliString::to_string() const {
    static const char* prefix[4] = {"", "+i\xc2\xb7", "-1\xc2\xb7", "-i\xc2\xb7"};
    std::string s = prefix[phase_quadrant & 3];
    for (int site = 0; site < n_sites; ++site) {
        const std::uint64_t bit = site_bit(n_sites, site);
        s += letter_of(x_mask & bit, z_mask & bit);
    }
    return s;
}

PauliString parse_pauli(const std::string& text) {
    std::size_t pos = 0;
    std::uint8_t quadrant = 0;

    auto starts_with = [&](const char* s) {
        const std::size_t len = std::char_traits<char>::length(s);
        return text.compare(pos, len, s) == 0 ? len : std::size_t{0};
    };
    // optional sign: '+', '-', or U+2212
    int sign = +1;
    bool have_prefix = false;
    if (std::size_t len = starts_with("+")) {
        pos += len;
        have_prefix = true;
    } else if (std::size_t len = starts_with("-")) {
        sign = -1;
        pos += len;
        have_prefix = true;
    } else if (std::size_t len = starts_with("\xe2\x88\x92")) {
        sign = -1;
        pos += len;
        have_prefix = true;
    }
    if (have_prefix) {
        if (pos < text.size() && text[pos] == '1') {
            quadrant = (sign > 0) ? 0 : 2;
            ++pos;
        } else if (pos < text.size() && text[pos] == 'i') {
            quadrant = (sign > 0) ? 1 : 3;
            ++pos;
        } else {
            throw std::invalid_argument("parse_pauli: bad phase prefix in '" + text + "'");
        }
        if (std::size_t len = starts_with("\xc2\xb7")) {
            pos += len;
        } else if (pos < text.size() && text[pos] == '*') {
            ++pos;
        } else {
            throw std::invalid_argument("parse_pauli: missing separator in '" + text + "'");
        }
    }

    const std::size_t n = text.size() - pos;
    if (n == 0) throw std::invalid_argument("parse_pauli: empty letter string");
    if (n > 64) throw std::invalid_argument("parse_pauli: more than 64 sites");
    std::uint64_t x = 0, z = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t bit = std::uint64_t{1} << (n - 1 - i);
        switch (text[pos + i]) {
            case 'I': break;
            case 'X': x |= bit; break;
            case 'Y': x |= bit; z |= bit; break;
            case 'Z': z |= bit; break;
            default:
                throw std::invalid_argument("parse_pauli: bad letter in '" + text + "'");
        }
    }
    return PauliString(static_cast<int>(n), x, z, quadrant);
}

}  // namespace scramble
