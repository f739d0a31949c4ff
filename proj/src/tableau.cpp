#include "qrsim/tableau.hpp"

#include <bit>
#include <stdexcept>

namespace qrsim {

static std::size_t words_for(std::size_t n) { return (n + 63) / 64; }

TableauState TableauState::zero_state(std::vector<std::uint64_t> keys) {
    TableauState t;
    t.n_ = keys.size();
    t.words_ = words_for(t.n_);
    t.keys_ = std::move(keys);
    t.xs_.assign(2 * t.n_ * t.words_, 0);
    t.zs_.assign(2 * t.n_ * t.words_, 0);
    t.signs_.assign(2 * t.n_, 0);
    for (std::size_t i = 0; i < t.n_; ++i) {
        t.xs_[i * t.words_ + i / 64] = 1ULL << (i % 64);            // destabilizer X_i
        t.zs_[(t.n_ + i) * t.words_ + i / 64] = 1ULL << (i % 64);   // stabilizer Z_i
    }
    return t;
}

TableauState TableauState::merge(const std::vector<const TableauState*>& parts) {
    TableauState t;
    for (const auto* p : parts) t.n_ += p->n_;
    t.words_ = words_for(t.n_);
    t.xs_.assign(2 * t.n_ * t.words_, 0);
    t.zs_.assign(2 * t.n_ * t.words_, 0);
    t.signs_.assign(2 * t.n_, 0);
    t.keys_.reserve(t.n_);

    std::size_t ofs = 0;
    for (const auto* p : parts) {
        for (std::size_t i = 0; i < p->n_; ++i) t.keys_.push_back(p->keys_[i]);
        for (std::size_t r = 0; r < p->n_; ++r) {
            std::size_t dd = ofs + r;            // destabilizer row
            std::size_t ds = t.n_ + ofs + r;     // stabilizer row
            t.signs_[dd] = p->signs_[r];
            t.signs_[ds] = p->signs_[p->n_ + r];
            for (std::size_t q = 0; q < p->n_; ++q) {
                std::size_t c = ofs + q;
                std::uint64_t bit = 1ULL << (c % 64);
                if (p->xbit(r, q)) t.xs_[dd * t.words_ + c / 64] |= bit;
                if (p->zbit(r, q)) t.zs_[dd * t.words_ + c / 64] |= bit;
                if (p->xbit(p->n_ + r, q)) t.xs_[ds * t.words_ + c / 64] |= bit;
                if (p->zbit(p->n_ + r, q)) t.zs_[ds * t.words_ + c / 64] |= bit;
            }
        }
        ofs += p->n_;
    }
    return t;
}

bool TableauState::xbit(std::size_t row, std::size_t q) const {
    return (xs_[row * words_ + q / 64] >> (q % 64)) & 1;
}
bool TableauState::zbit(std::size_t row, std::size_t q) const {
    return (zs_[row * words_ + q / 64] >> (q % 64)) & 1;
}

bool TableauState::anticommutes(std::size_t row, std::size_t q, Basis basis) const {
    return basis == Basis::Z ? xbit(row, q) : zbit(row, q);
}

void TableauState::h(std::size_t q) {
    std::size_t wq = q / 64;
    std::uint64_t b = 1ULL << (q % 64);
    for (std::size_t r = 0; r < 2 * n_; ++r) {
        std::uint64_t& xv = xs_[r * words_ + wq];
        std::uint64_t& zv = zs_[r * words_ + wq];
        std::uint64_t xb = xv & b, zb = zv & b;
        if (xb && zb) signs_[r] ^= 1;
        xv = (xv & ~b) | (zb ? b : 0);
        zv = (zv & ~b) | (xb ? b : 0);
    }
}

void TableauState::s(std::size_t q) {
    std::size_t wq = q / 64;
    std::uint64_t b = 1ULL << (q % 64);
    for (std::size_t r = 0; r < 2 * n_; ++r) {
        std::uint64_t xb = xs_[r * words_ + wq] & b;
        std::uint64_t zb = zs_[r * words_ + wq] & b;
        if (xb && zb) signs_[r] ^= 1;
        if (xb) zs_[r * words_ + wq] ^= b;
    }
}

void TableauState::x(std::size_t q) {
    for (std::size_t r = 0; r < 2 * n_; ++r)
        if (zbit(r, q)) signs_[r] ^= 1;
}

void TableauState::z(std::size_t q) {
    for (std::size_t r = 0; r < 2 * n_; ++r)
        if (xbit(r, q)) signs_[r] ^= 1;
}

void TableauState::y(std::size_t q) {
    for (std::size_t r = 0; r < 2 * n_; ++r)
        if (xbit(r, q) != zbit(r, q)) signs_[r] ^= 1;
}

void TableauState::cnot(std::size_t control, std::size_t target) {
    std::size_t wc = control / 64, wt = target / 64;
    std::uint64_t bc = 1ULL << (control % 64), bt = 1ULL << (target % 64);
    for (std::size_t r = 0; r < 2 * n_; ++r) {
        std::uint64_t xc = xs_[r * words_ + wc] & bc;
        std::uint64_t zc = zs_[r * words_ + wc] & bc;
        std::uint64_t xt = xs_[r * words_ + wt] & bt;
        std::uint64_t zt = zs_[r * words_ + wt] & bt;
        if (xc && zt && (!xt == !zc)) signs_[r] ^= 1;
        if (xc) xs_[r * words_ + wt] ^= bt;
        if (zt) zs_[r * words_ + wc] ^= bc;
    }
}

void TableauState::row_mul(std::size_t dst, std::size_t src) {
    int plus = 0, minus = 0;
    for (std::size_t w = 0; w < words_; ++w) {
        std::uint64_t ax = xs_[dst * words_ + w], az = zs_[dst * words_ + w];
        std::uint64_t bx = xs_[src * words_ + w], bz = zs_[src * words_ + w];
        std::uint64_t cyc = (~ax & az & bx & ~bz) | (ax & ~az & bx & bz) | (ax & az & ~bx & bz);
        std::uint64_t rev = (ax & ~az & ~bx & bz) | (ax & az & bx & ~bz) | (~ax & az & bx & bz);
        plus += std::popcount(cyc);
        minus += std::popcount(rev);
        xs_[dst * words_ + w] ^= bx;
        zs_[dst * words_ + w] ^= bz;
    }
    int k = ((plus - minus) % 4 + 4) % 4;
    signs_[dst] ^= signs_[src] ^ static_cast<std::uint8_t>((k >> 1) & 1);
}

void TableauState::row_mul_into(std::vector<std::uint64_t>& accx, std::vector<std::uint64_t>& accz,
                                int& accsign, std::size_t src) const {
    int plus = 0, minus = 0;
    for (std::size_t w = 0; w < words_; ++w) {
        std::uint64_t ax = accx[w], az = accz[w];
        std::uint64_t bx = xs_[src * words_ + w], bz = zs_[src * words_ + w];
        std::uint64_t cyc = (~ax & az & bx & ~bz) | (ax & ~az & bx & bz) | (ax & az & ~bx & bz);
        std::uint64_t rev = (ax & ~az & ~bx & bz) | (ax & az & bx & ~bz) | (~ax & az & bx & bz);
        plus += std::popcount(cyc);
        minus += std::popcount(rev);
        accx[w] ^= bx;
        accz[w] ^= bz;
    }
    int k = ((plus - minus) % 4 + 4) % 4;
    accsign ^= signs_[src] ^ ((k >> 1) & 1);
}

int TableauState::measure(std::size_t q, Basis basis, RngStream& rng) {
    if (q >= n_) throw std::invalid_argument("TableauState::measure: qubit out of range");
    std::size_t p = 2 * n_;
    for (std::size_t r = n_; r < 2 * n_; ++r) {
        if (anticommutes(r, q, basis)) { p = r; break; }
    }

    if (p < 2 * n_) {
        // Random outcome: standard update, then make row p exactly +/-W_q.
        for (std::size_t r = 0; r < 2 * n_; ++r)
            if (r != p && anticommutes(r, q, basis)) row_mul(r, p);
        std::size_t d = p - n_;
        for (std::size_t w = 0; w < words_; ++w) {
            xs_[d * words_ + w] = xs_[p * words_ + w];
            zs_[d * words_ + w] = zs_[p * words_ + w];
        }
        signs_[d] = signs_[p];
        for (std::size_t w = 0; w < words_; ++w) {
            xs_[p * words_ + w] = 0;
            zs_[p * words_ + w] = 0;
        }
        int outcome = static_cast<int>(rng.next_u64() & 1);
        std::uint64_t bit = 1ULL << (q % 64);
        if (basis == Basis::Z)
            zs_[p * words_ + q / 64] = bit;
        else
            xs_[p * words_ + q / 64] = bit;
        signs_[p] = static_cast<std::uint8_t>(outcome);
        sweep_column(p, q, basis);
        return outcome;
    }

    // Deterministic outcome: accumulate the stabilizer product that equals
    // +/-W_q, then rotate the generating set so one row holds it.
    std::vector<std::uint64_t> accx(words_, 0), accz(words_, 0);
    int accsign = 0;
    std::vector<std::size_t> t_set;
    for (std::size_t i = 0; i < n_; ++i) {
        if (anticommutes(i, q, basis)) {
            t_set.push_back(i);
            row_mul_into(accx, accz, accsign, n_ + i);
        }
    }
    if (t_set.empty()) throw std::logic_error("measure: observable not in stabilizer group");
    int outcome = accsign;

    std::size_t i0 = t_set[0];
    std::size_t ps = n_ + i0;
    for (std::size_t w = 0; w < words_; ++w) {
        xs_[ps * words_ + w] = accx[w];
        zs_[ps * words_ + w] = accz[w];
    }
    signs_[ps] = static_cast<std::uint8_t>(accsign);
    // Dual fix keeps destabilizer/stabilizer pairing symplectic.
    for (std::size_t j = 1; j < t_set.size(); ++j) {
        std::size_t dj = t_set[j];
        for (std::size_t w = 0; w < words_; ++w) {
            xs_[dj * words_ + w] ^= xs_[i0 * words_ + w];
            zs_[dj * words_ + w] ^= zs_[i0 * words_ + w];
        }
    }
    sweep_column(ps, q, basis);
    return outcome;
}

void TableauState::sweep_column(std::size_t p, std::size_t q, Basis basis) {
    // Clears the measured column from every other stabilizer row using row p
    // (which is exactly +/-W_q). Each s_r *= s_p needs the inverse operation
    // d_p *= d_r on the duals to keep the pairing symplectic.
    for (std::size_t r = n_; r < 2 * n_; ++r) {
        if (r == p) continue;
        if (basis == Basis::Z ? zbit(r, q) : xbit(r, q)) {
            row_mul(r, p);
            row_mul(p - n_, r - n_);
        }
    }
}

bool TableauState::is_deterministic(std::size_t q, Basis basis) const {
    for (std::size_t r = n_; r < 2 * n_; ++r)
        if (anticommutes(r, q, basis)) return false;
    return true;
}

int TableauState::measure_pauli(const PauliString& obs, RngStream& rng) {
    if (obs.num_qubits() != n_) throw std::invalid_argument("measure_pauli: size mismatch");
    auto anti_obs = [&](std::size_t row) {
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < words_; ++w)
            acc ^= (xw(row, w) & obs.z_word(w)) ^ (zw(row, w) & obs.x_word(w));
        return std::popcount(acc) % 2 == 1;
    };

    std::size_t p = 2 * n_;
    for (std::size_t r = n_; r < 2 * n_; ++r)
        if (anti_obs(r)) { p = r; break; }

    if (p < 2 * n_) {
        for (std::size_t r = 0; r < 2 * n_; ++r)
            if (r != p && anti_obs(r)) row_mul(r, p);
        std::size_t d = p - n_;
        for (std::size_t w = 0; w < words_; ++w) {
            xs_[d * words_ + w] = xs_[p * words_ + w];
            zs_[d * words_ + w] = zs_[p * words_ + w];
        }
        signs_[d] = signs_[p];
        int outcome = static_cast<int>(rng.next_u64() & 1);
        for (std::size_t w = 0; w < words_; ++w) {
            xs_[p * words_ + w] = obs.x_word(w);
            zs_[p * words_ + w] = obs.z_word(w);
        }
        signs_[p] = static_cast<std::uint8_t>(outcome ^ (obs.negative() ? 1 : 0));
        return outcome;
    }

    std::vector<std::uint64_t> accx(words_, 0), accz(words_, 0);
    int accsign = 0;
    for (std::size_t i = 0; i < n_; ++i)
        if (anti_obs(i)) row_mul_into(accx, accz, accsign, n_ + i);
    for (std::size_t w = 0; w < words_; ++w)
        if (accx[w] != obs.x_word(w) || accz[w] != obs.z_word(w))
            throw std::logic_error("measure_pauli: observable not in stabilizer group");
    return accsign ^ (obs.negative() ? 1 : 0);
}

TableauState TableauState::take_out(std::size_t q) {
    // Locate the lone stabilizer row supported on q.
    std::size_t p = 2 * n_;
    for (std::size_t r = n_; r < 2 * n_; ++r) {
        if (xbit(r, q) || zbit(r, q)) {
            if (p < 2 * n_) throw std::logic_error("take_out: column not isolated");
            p = r;
        }
    }
    if (p == 2 * n_) throw std::logic_error("take_out: no stabilizer on column");
    bool xb = xbit(p, q), zb = zbit(p, q);
    if (xb && zb) throw std::logic_error("take_out: column not a Z/X product factor");

    TableauState solo = zero_state({keys_[q]});
    if (xb) solo.h(0);
    if (signs_[p]) {
        if (xb) solo.z(0);   // |->
        else solo.x(0);      // |1>
    }

    // Rebuild without column q and without pair (p - n_).
    std::size_t drop_pair = p - n_;
    TableauState rest;
    rest.n_ = n_ - 1;
    rest.words_ = words_for(rest.n_);
    rest.xs_.assign(2 * rest.n_ * rest.words_, 0);
    rest.zs_.assign(2 * rest.n_ * rest.words_, 0);
    rest.signs_.assign(2 * rest.n_, 0);
    rest.keys_.reserve(rest.n_);
    for (std::size_t c = 0; c < n_; ++c)
        if (c != q) rest.keys_.push_back(keys_[c]);

    auto copy_row = [&](std::size_t src, std::size_t dst) {
        rest.signs_[dst] = signs_[src];
        std::size_t cc = 0;
        for (std::size_t c = 0; c < n_; ++c) {
            if (c == q) continue;
            std::uint64_t bit = 1ULL << (cc % 64);
            if (xbit(src, c)) rest.xs_[dst * rest.words_ + cc / 64] |= bit;
            if (zbit(src, c)) rest.zs_[dst * rest.words_ + cc / 64] |= bit;
            ++cc;
        }
    };
    std::size_t dr = 0;
    for (std::size_t i = 0; i < n_; ++i)
        if (i != drop_pair) copy_row(i, dr++);
    for (std::size_t i = 0; i < n_; ++i)
        if (i != drop_pair) copy_row(n_ + i, dr++);

    *this = std::move(rest);
    return solo;
}

int TableauState::peek(const PauliString& obs) const {
    if (obs.num_qubits() != n_) throw std::invalid_argument("peek: size mismatch");
    for (std::size_t r = n_; r < 2 * n_; ++r) {
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < words_; ++w)
            acc ^= (xw(r, w) & obs.z_word(w)) ^ (zw(r, w) & obs.x_word(w));
        if (std::popcount(acc) % 2) return 0;
    }
    std::vector<std::uint64_t> accx(words_, 0), accz(words_, 0);
    int accsign = 0;
    for (std::size_t i = 0; i < n_; ++i) {
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < words_; ++w)
            acc ^= (xw(i, w) & obs.z_word(w)) ^ (zw(i, w) & obs.x_word(w));
        if (std::popcount(acc) % 2) row_mul_into(accx, accz, accsign, n_ + i);
    }
    for (std::size_t w = 0; w < words_; ++w)
        if (accx[w] != obs.x_word(w) || accz[w] != obs.z_word(w))
            throw std::logic_error("peek: inconsistent tableau");
    return (accsign == (obs.negative() ? 1 : 0)) ? 1 : -1;
}

bool TableauState::check_valid() const {
    auto anti_rows = [&](std::size_t a, std::size_t b) {
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < words_; ++w)
            acc ^= (xw(a, w) & zw(b, w)) ^ (zw(a, w) & xw(b, w));
        return std::popcount(acc) % 2 == 1;
    };
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
            if (anti_rows(n_ + i, n_ + j)) return false;                  // stabilizers commute
            if (anti_rows(i, n_ + j) != (i == j)) return false;           // pairing
        }
    // Full rank over GF(2).
    std::vector<std::vector<std::uint64_t>> m;
    for (std::size_t i = 0; i < n_; ++i) {
        std::vector<std::uint64_t> row(2 * words_);
        for (std::size_t w = 0; w < words_; ++w) {
            row[w] = xw(n_ + i, w);
            row[words_ + w] = zw(n_ + i, w);
        }
        m.push_back(std::move(row));
    }
    std::size_t rank = 0;
    for (std::size_t bitpos = 0; bitpos < 2 * words_ * 64 && rank < m.size(); ++bitpos) {
        std::size_t w = bitpos / 64;
        std::uint64_t b = 1ULL << (bitpos % 64);
        std::size_t pivot = m.size();
        for (std::size_t r = rank; r < m.size(); ++r)
            if (m[r][w] & b) { pivot = r; break; }
        if (pivot == m.size()) continue;
        std::swap(m[rank], m[pivot]);
        for (std::size_t r = 0; r < m.size(); ++r)
            if (r != rank && (m[r][w] & b))
                for (std::size_t k = 0; k < m[r].size(); ++k) m[r][k] ^= m[rank][k];
        ++rank;
    }
    return rank == n_;
}

}  // namespace qrsim
