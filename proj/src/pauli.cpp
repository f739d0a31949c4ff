#include "qrsim/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace qrsim {

static std::size_t words_for(std::size_t n) { return (n + 63) / 64; }

PauliString::PauliString(std::size_t n)
    : n_(n), x_(words_for(n), 0), z_(words_for(n), 0) {}

PauliString PauliString::from_text(const std::string& text) {
    std::size_t i = 0;
    bool neg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        neg = text[i] == '-';
        ++i;
    }
    PauliString p(text.size() - i);
    for (std::size_t q = 0; i < text.size(); ++i, ++q) p.set(q, text[i]);
    p.neg_ = neg;
    return p;
}

PauliString PauliString::single(std::size_t n, std::size_t q, char which) {
    PauliString p(n);
    p.set(q, which);
    return p;
}

char PauliString::at(std::size_t q) const {
    bool x = (x_[q / 64] >> (q % 64)) & 1;
    bool z = (z_[q / 64] >> (q % 64)) & 1;
    return x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
}

void PauliString::set(std::size_t q, char which) {
    if (q >= n_) throw std::invalid_argument("PauliString::set: qubit out of range");
    std::uint64_t bit = 1ULL << (q % 64);
    std::uint64_t xv = 0, zv = 0;
    switch (which) {
        case 'I': break;
        case 'X': xv = bit; break;
        case 'Y': xv = bit; zv = bit; break;
        case 'Z': zv = bit; break;
        default: throw std::invalid_argument("PauliString::set: bad letter");
    }
    x_[q / 64] = (x_[q / 64] & ~bit) | xv;
    z_[q / 64] = (z_[q / 64] & ~bit) | zv;
}

bool PauliString::commutes_with(const PauliString& other) const {
    if (n_ != other.n_) throw std::invalid_argument("PauliString size mismatch");
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < x_.size(); ++w)
        acc ^= (x_[w] & other.z_[w]) ^ (z_[w] & other.x_[w]);
    return std::popcount(acc) % 2 == 0;
}

int PauliString::phase_exponent(const PauliString& a, const PauliString& b) {
    // Per-qubit products pick up i on cyclic letter pairs (ZX, XY, YZ) and
    // i^3 on the reversed ones; everything else contributes nothing.
    int plus = 0, minus = 0;
    for (std::size_t w = 0; w < a.x_.size(); ++w) {
        std::uint64_t ax = a.x_[w], az = a.z_[w], bx = b.x_[w], bz = b.z_[w];
        std::uint64_t cyc = (~ax & az & bx & ~bz)   // Z * X
                          | (ax & ~az & bx & bz)    // X * Y
                          | (ax & az & ~bx & bz);   // Y * Z
        std::uint64_t rev = (ax & ~az & ~bx & bz)   // X * Z
                          | (ax & az & bx & ~bz)    // Y * X
                          | (~ax & az & bx & bz);   // Z * Y
        plus += std::popcount(cyc);
        minus += std::popcount(rev);
    }
    return ((plus + 3 * minus) % 4 + 4) % 4;
}

void PauliString::rmul(const PauliString& other) {
    if (n_ != other.n_) throw std::invalid_argument("PauliString size mismatch");
    int k = phase_exponent(*this, other);
    if (k % 2 != 0) throw std::logic_error("PauliString::rmul: anticommuting product");
    neg_ = neg_ ^ other.neg_ ^ (k == 2);
    for (std::size_t w = 0; w < x_.size(); ++w) {
        x_[w] ^= other.x_[w];
        z_[w] ^= other.z_[w];
    }
}

std::string PauliString::str() const {
    std::string s(neg_ ? "-" : "+");
    for (std::size_t q = 0; q < n_; ++q) s += at(q);
    return s;
}

bool PauliString::is_identity_letters() const {
    for (std::size_t w = 0; w < x_.size(); ++w)
        if (x_[w] | z_[w]) return false;
    return true;
}

std::size_t PauliString::weight() const {
    std::size_t s = 0;
    for (std::size_t w = 0; w < x_.size(); ++w) s += std::popcount(x_[w] | z_[w]);
    return s;
}

}  // namespace qrsim
