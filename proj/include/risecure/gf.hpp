#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace risecure {

using GfElem = std::uint16_t;

/// GF(2^m) with log/antilog tables, 2 <= m <= 12.
class GaloisField {
public:
    GaloisField(unsigned m, unsigned primitive_poly);

    unsigned degree() const noexcept { return m_; }
    unsigned primitive_poly() const noexcept { return poly_; }
    /// Multiplicative group order, 2^m - 1.
    unsigned group_order() const noexcept { return n_; }

    /// alpha^e for any integer e.
    GfElem exp(long e) const noexcept {
        long r = e % static_cast<long>(n_);
        if (r < 0) r += n_;
        return exp_[static_cast<std::size_t>(r)];
    }
    /// Discrete log of a nonzero element.
    unsigned log(GfElem a) const noexcept { return log_[a]; }

    GfElem mul(GfElem a, GfElem b) const noexcept {
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }
    GfElem div(GfElem a, GfElem b) const;
    GfElem inv(GfElem a) const;
    GfElem pow(GfElem a, long e) const noexcept;

private:
    unsigned m_;
    unsigned poly_;
    unsigned n_;
    std::vector<GfElem> exp_;  // doubled so mul needs no reduction
    std::vector<unsigned> log_;
};

/// Evaluates a polynomial with coefficients in ascending powers.
GfElem poly_eval(const GaloisField& gf, std::span<const GfElem> coeffs, GfElem x) noexcept;

/// Berlekamp-Massey: shortest LFSR (error locator, ascending powers, constant
/// term 1) generating `syndromes` S_1..S_2t.
std::vector<GfElem> berlekamp_massey(const GaloisField& gf, std::span<const GfElem> syndromes);

/// Primitive polynomial used when a code is requested by length only.
unsigned default_primitive_poly(unsigned m);

}  // namespace risecure
