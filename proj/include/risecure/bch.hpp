#pragma once

#include "risecure/bits.hpp"
#include "risecure/gf.hpp"

#include <optional>
#include <vector>

namespace risecure {

/// Narrow-sense primitive binary BCH code of length 2^m - 1 correcting t
/// errors. Systematic: a codeword is message || parity, with bit 0 holding the
/// coefficient of x^(n-1).
class BchCode {
public:
    BchCode(unsigned m, unsigned primitive_poly, unsigned t);

    std::size_t n() const noexcept { return n_; }
    std::size_t k() const noexcept { return k_; }
    unsigned t() const noexcept { return t_; }
    const GaloisField& field() const noexcept { return gf_; }

    /// Generator polynomial over GF(2), ascending powers, degree n - k.
    const std::vector<std::uint8_t>& generator() const noexcept { return generator_; }

    Bits encode(const Bits& message) const;
    /// Corrects up to t bit errors and returns the full codeword, or nullopt
    /// when the error locator is inconsistent with its roots.
    std::optional<Bits> correct(const Bits& received) const;
    std::optional<Bits> decode(const Bits& received) const;

    /// Syndromes S_1..S_2t of a received word.
    std::vector<GfElem> syndromes(const Bits& received) const;

private:
    GaloisField gf_;
    unsigned t_;
    std::size_t n_;
    std::size_t k_;
    std::vector<std::uint8_t> generator_;
};

}  // namespace risecure
