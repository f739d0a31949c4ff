#pragma once

#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

namespace qrsim {

/// n-qubit Pauli operator in canonical form (-1)^neg * prod_q W_q with
/// W in {I,X,Y,Z} and Y == iXZ. X/Z supports are bit-packed, one bit per
/// qubit, 64 qubits per word.
class PauliString {
  public:
    PauliString() = default;
    explicit PauliString(std::size_t n);
    /// Parses "+XIZ", "-YY", "XX" (sign optional).
    static PauliString from_text(const std::string& text);
    /// Weight-1 operator: `which` is 'X', 'Y' or 'Z'.
    static PauliString single(std::size_t n, std::size_t q, char which);

    std::size_t num_qubits() const { return n_; }
    char at(std::size_t q) const;
    void set(std::size_t q, char which);
    bool negative() const { return neg_; }
    void set_negative(bool v) { neg_ = v; }

    bool commutes_with(const PauliString& other) const;

    /// this <- this * other under the group law. The accumulated power of i
    /// must come out even (it always does for products of commuting operators
    /// and for stabilizer row updates); odd powers throw.
    void rmul(const PauliString& other);

    /// Exponent of i (mod 4) picked up by composing a*b, ignoring input signs.
    static int phase_exponent(const PauliString& a, const PauliString& b);

    bool operator==(const PauliString& other) const = default;
    bool same_letters(const PauliString& other) const {
        return x_ == other.x_ && z_ == other.z_;
    }

    std::string str() const;
    bool is_identity_letters() const;
    std::size_t weight() const;

    // Raw word access for the tableau row engine.
    std::size_t words() const { return x_.size(); }
    std::uint64_t x_word(std::size_t w) const { return x_[w]; }
    std::uint64_t z_word(std::size_t w) const { return z_[w]; }
    void set_x_word(std::size_t w, std::uint64_t v) { x_[w] = v; }
    void set_z_word(std::size_t w, std::uint64_t v) { z_[w] = v; }

  private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> x_, z_;
    bool neg_ = false;
};

}  // namespace qrsim
