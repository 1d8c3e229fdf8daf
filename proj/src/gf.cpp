#include "risecure/gf.hpp"

#include "risecure/error.hpp"

#include <string>

namespace risecure {

GaloisField::GaloisField(unsigned m, unsigned primitive_poly)
    : m_(m), poly_(primitive_poly), n_((1U << m) - 1U) {
    if (m < 2 || m > 12) throw Error("GaloisField: degree must be in [2, 12]");
    if ((primitive_poly >> m) != 1U) throw Error("GaloisField: polynomial degree does not match m");
    exp_.assign(2 * static_cast<std::size_t>(n_), 0);
    log_.assign(static_cast<std::size_t>(n_) + 1, 0);
    unsigned x = 1;
    for (unsigned i = 0; i < n_; ++i) {
        if (i > 0 && x == 1) throw Error("GaloisField: polynomial is not primitive");
        exp_[i] = static_cast<GfElem>(x);
        log_[x] = i;
        x <<= 1;
        if (x & (1U << m)) x ^= primitive_poly;
    }
    if (x != 1) throw Error("GaloisField: polynomial is not primitive");
    for (unsigned i = n_; i < 2 * n_; ++i) exp_[i] = exp_[i - n_];
}

GfElem GaloisField::div(GfElem a, GfElem b) const {
    if (b == 0) throw Error("GaloisField: division by zero");
    if (a == 0) return 0;
    return exp_[log_[a] + n_ - log_[b]];
}

GfElem GaloisField::inv(GfElem a) const { return div(1, a); }

GfElem GaloisField::pow(GfElem a, long e) const noexcept {
    if (a == 0) return e == 0 ? 1 : 0;
    return exp(static_cast<long>(log_[a]) * e);
}

GfElem poly_eval(const GaloisField& gf, std::span<const GfElem> coeffs, GfElem x) noexcept {
    GfElem acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = gf.mul(acc, x) ^ *it;
    return acc;
}

std::vector<GfElem> berlekamp_massey(const GaloisField& gf, std::span<const GfElem> syndromes) {
    std::vector<GfElem> c{1};
    std::vector<GfElem> b{1};
    std::size_t len = 0;
    std::size_t shift = 1;
    GfElem last_disc = 1;
    for (std::size_t i = 0; i < syndromes.size(); ++i) {
        GfElem d = syndromes[i];
        for (std::size_t j = 1; j <= len && j < c.size(); ++j) d ^= gf.mul(c[j], syndromes[i - j]);
        if (d == 0) {
            ++shift;
            continue;
        }
        const GfElem coef = gf.div(d, last_disc);
        std::vector<GfElem> next = c;
        if (next.size() < b.size() + shift) next.resize(b.size() + shift, 0);
        for (std::size_t j = 0; j < b.size(); ++j) next[j + shift] ^= gf.mul(coef, b[j]);
        if (2 * len <= i) {
            b = std::move(c);
            len = i + 1 - len;
            last_disc = d;
            shift = 1;
        } else {
            ++shift;
        }
        c = std::move(next);
    }
    c.resize(len + 1, 0);
    return c;
}

unsigned default_primitive_poly(unsigned m) {
    switch (m) {
        case 2: return 0x7;
        case 3: return 0xB;
        case 4: return 0x13;
        case 5: return 0x25;
        case 6: return 0x43;
        case 7: return 0x89;    // x^7 + x^3 + 1
        case 8: return 0x11D;   // x^8 + x^4 + x^3 + x^2 + 1
        case 9: return 0x211;
        case 10: return 0x409;
        case 11: return 0x805;
        case 12: return 0x1053;
        default: throw Error("no default primitive polynomial for m = " + std::to_string(m));
    }
}

}  // namespace risecure
