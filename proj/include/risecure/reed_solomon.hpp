#pragma once

#include "risecure/gf.hpp"

#include <optional>
#include <span>
#include <vector>

namespace risecure {

/// Systematic Reed-Solomon code over GF(2^m), m <= 8, length 2^m - 1 with
/// 2t parity symbols. Generator roots are alpha^1 .. alpha^2t. Symbol 0 is
/// the coefficient of x^(n-1); message symbols come first.
class ReedSolomonCode {
public:
    using Symbol = std::uint8_t;

    ReedSolomonCode(unsigned m, unsigned primitive_poly, unsigned t);

    std::size_t n() const noexcept { return n_; }
    std::size_t k() const noexcept { return n_ - 2 * t_; }
    unsigned t() const noexcept { return t_; }
    const GaloisField& field() const noexcept { return gf_; }
    /// Ascending powers, monic, degree 2t.
    const std::vector<GfElem>& generator() const noexcept { return generator_; }

    std::vector<Symbol> encode(std::span<const Symbol> message) const;
    /// Syndromes, Berlekamp-Massey, Chien search and Forney. Returns the
    /// corrected codeword or nullopt on an inconsistent locator.
    std::optional<std::vector<Symbol>> correct(std::span<const Symbol> received) const;
    std::optional<std::vector<Symbol>> decode(std::span<const Symbol> received) const;

    std::vector<GfElem> syndromes(std::span<const Symbol> received) const;

private:
    GaloisField gf_;
    unsigned t_;
    std::size_t n_;
    std::vector<GfElem> generator_;
};

}  // namespace risecure
