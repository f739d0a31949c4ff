#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qrsim/noise.hpp"
#include "qrsim/pauli.hpp"
#include "qrsim/quantum_manager.hpp"

namespace qrsim {

/// Fault-tolerance level of block preparation.
enum class FtMode { None, Minimal, Standard };

/// Whether measured blocks get classical error correction before readout.
enum class CecMode { Cec, None };

FtMode ft_mode_from_name(const std::string& name);
CecMode cec_mode_from_name(const std::string& name);
std::string to_string(FtMode m);
std::string to_string(CecMode m);

/// Classical readout of one 7-qubit block. Bit i of each mask is qubit i+1
/// (positions are 1-based throughout, matching the code tables).
struct MeasuredBlock {
    std::uint8_t m = 0;        // raw outcome bits
    std::uint8_t syndrome = 0; // 3-bit Hamming syndrome, value == error position
    std::uint8_t m_prime = 0;  // corrected bits (== m when cec is off)
    int logical_bit = 0;       // parity of m_prime
};

/// A CSS code with a fixed encoder circuit. Only "steane713" is registered,
/// but everything downstream works through this interface.
class CssCode {
  public:
    struct EncoderOp {
        enum Kind { H, CNOT } kind;
        std::size_t a = 0;  // 0-based qubit index within the block
        std::size_t b = 0;  // CNOT target
    };

    static const CssCode& by_name(const std::string& name);

    const std::string& name() const { return name_; }
    std::size_t n() const { return n_; }
    std::size_t k() const { return k_; }
    std::size_t d() const { return d_; }

    /// Parity-check rows as position bitmasks, most significant syndrome bit
    /// first. Column j is the binary representation of j.
    const std::array<std::uint8_t, 3>& h_rows() const { return h_rows_; }

    /// s = H m over GF(2), packed so its value is the error position (0 =
    /// clean).
    std::uint8_t hamming_syndrome(std::uint8_t m) const;
    /// Table-driven single-error decode + parity readout.
    MeasuredBlock correct_and_extract(std::uint8_t m, CecMode mode) const;

    const std::vector<PauliString>& x_stabilizers() const { return x_stabs_; }
    const std::vector<PauliString>& z_stabilizers() const { return z_stabs_; }
    const PauliString& logical_x() const { return logical_x_; }
    const PauliString& logical_z() const { return logical_z_; }
    /// Weight-3 logical-Z representative checked during preparation.
    std::uint8_t verification_support() const { return verify_mask_; }
    const std::vector<EncoderOp>& encoder_ops() const { return encoder_; }

  private:
    CssCode() = default;
    static CssCode make_steane();

    std::string name_;
    std::size_t n_ = 0, k_ = 0, d_ = 0;
    std::array<std::uint8_t, 3> h_rows_{};
    std::vector<PauliString> x_stabs_, z_stabs_;
    PauliString logical_x_, logical_z_;
    std::uint8_t verify_mask_ = 0;
    std::vector<EncoderOp> encoder_;
};

struct EncodeResult {
    std::vector<Key> data;  // the accepted block, empty on failure
    int attempts = 0;
    bool ok = true;
};

/// Prepares one logical |0> block at time `now` (all gates instantaneous).
/// Verification rejects flip-carrying blocks and re-prepares from scratch, up
/// to `retry_cap` attempts.
EncodeResult encode_zero(const CssCode& code, NoiseEngine& eng, TimePs now, FtMode mode,
                         int retry_cap);

/// CNOT(control_i -> target_i) for each block position, with gate noise.
void transversal_cnot(const CssCode& code, NoiseEngine& eng, const std::vector<Key>& control,
                      const std::vector<Key>& target, TimePs now);

/// H on every block position, with gate noise.
void transversal_h(const CssCode& code, NoiseEngine& eng, const std::vector<Key>& block,
                   TimePs now);

/// Noiseless syndrome extraction and single-qubit correction, Z sector then
/// X sector. This is analysis-side machinery, so it bypasses the noise
/// engine and its counters entirely.
void ideal_recovery(const CssCode& code, QuantumManager& qm, const std::vector<Key>& block,
                    RngStream& rng);

}  // namespace qrsim
