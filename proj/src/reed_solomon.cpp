#include "risecure/reed_solomon.hpp"

#include "risecure/error.hpp"

#include <algorithm>
#include <string>

namespace risecure {

namespace {
constexpr unsigned kFirstRoot = 1;

bool all_zero(const std::vector<GfElem>& v) {
    return std::all_of(v.begin(), v.end(), [](GfElem x) { return x == 0; });
}
}  // namespace

ReedSolomonCode::ReedSolomonCode(unsigned m, unsigned primitive_poly, unsigned t)
    : gf_(m, primitive_poly), t_(t), n_(gf_.group_order()) {
    if (m > 8) throw Error("ReedSolomonCode: symbols wider than 8 bits are not supported");
    if (t == 0 || 2 * t >= n_) throw Error("ReedSolomonCode: t out of range");
    generator_ = {1};
    for (unsigned i = 0; i < 2 * t; ++i) {
        const GfElem root = gf_.exp(kFirstRoot + i);
        std::vector<GfElem> next(generator_.size() + 1, 0);
        for (std::size_t j = 0; j < generator_.size(); ++j) {
            next[j + 1] ^= generator_[j];
            next[j] ^= gf_.mul(generator_[j], root);
        }
        generator_ = std::move(next);
    }
}

std::vector<ReedSolomonCode::Symbol> ReedSolomonCode::encode(std::span<const Symbol> message) const {
    if (message.size() != k()) throw Error("ReedSolomonCode::encode: message length must be " + std::to_string(k()));
    const std::size_t r = 2 * t_;
    std::vector<GfElem> rem(r, 0);
    for (Symbol sym : message) {
        if (sym > gf_.group_order()) throw Error("ReedSolomonCode::encode: symbol out of field");
        const GfElem fb = sym ^ rem[r - 1];
        for (std::size_t i = r - 1; i > 0; --i) rem[i] = rem[i - 1] ^ gf_.mul(fb, generator_[i]);
        rem[0] = gf_.mul(fb, generator_[0]);
    }
    std::vector<Symbol> cw(message.begin(), message.end());
    cw.reserve(n_);
    for (std::size_t i = 0; i < r; ++i) cw.push_back(static_cast<Symbol>(rem[r - 1 - i]));
    return cw;
}

std::vector<GfElem> ReedSolomonCode::syndromes(std::span<const Symbol> received) const {
    std::vector<GfElem> s(2 * t_, 0);
    for (unsigned i = 0; i < 2 * t_; ++i) {
        const GfElem x = gf_.exp(kFirstRoot + i);
        GfElem acc = 0;
        for (Symbol sym : received) acc = gf_.mul(acc, x) ^ sym;
        s[i] = acc;
    }
    return s;
}

std::optional<std::vector<ReedSolomonCode::Symbol>> ReedSolomonCode::correct(std::span<const Symbol> received) const {
    if (received.size() != n_) throw Error("ReedSolomonCode::decode: received length must be " + std::to_string(n_));
    const auto s = syndromes(received);
    std::vector<Symbol> out(received.begin(), received.end());
    if (all_zero(s)) return out;

    const auto locator = berlekamp_massey(gf_, s);
    const std::size_t degree = locator.size() - 1;
    if (degree == 0 || degree > t_) return std::nullopt;

    // Omega(x) = S(x) * Lambda(x) mod x^2t
    const std::size_t r = 2 * t_;
    std::vector<GfElem> omega(r, 0);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j <= i && j < locator.size(); ++j) omega[i] ^= gf_.mul(locator[j], s[i - j]);
    }
    // Formal derivative: only odd powers survive in characteristic 2.
    std::vector<GfElem> dlocator(degree, 0);
    for (std::size_t i = 1; i < locator.size(); i += 2) dlocator[i - 1] = locator[i];

    std::size_t found = 0;
    for (std::size_t i = 0; i < n_; ++i) {
        const GfElem x_inv = gf_.exp(-static_cast<long>(i));
        if (poly_eval(gf_, locator, x_inv) != 0) continue;
        const GfElem denom = poly_eval(gf_, dlocator, x_inv);
        if (denom == 0) return std::nullopt;
        // e = X^(1 - b) * Omega(X^-1) / Lambda'(X^-1), b = first root exponent
        GfElem mag = gf_.div(poly_eval(gf_, omega, x_inv), denom);
        mag = gf_.mul(mag, gf_.exp(static_cast<long>(i) * (1 - static_cast<long>(kFirstRoot))));
        out[n_ - 1 - i] ^= static_cast<Symbol>(mag);
        ++found;
    }
    if (found != degree) return std::nullopt;
    if (!all_zero(syndromes(out))) return std::nullopt;
    return out;
}

std::optional<std::vector<ReedSolomonCode::Symbol>> ReedSolomonCode::decode(std::span<const Symbol> received) const {
    auto cw = correct(received);
    if (!cw) return std::nullopt;
    cw->resize(k());
    return cw;
}

}  // namespace risecure
