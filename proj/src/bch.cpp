#include "risecure/bch.hpp"

#include "risecure/error.hpp"

#include <algorithm>
#include <set>

namespace risecure {

BchCode::BchCode(unsigned m, unsigned primitive_poly, unsigned t)
    : gf_(m, primitive_poly), t_(t), n_(gf_.group_order()) {
    if (t == 0 || 2 * t >= n_) throw Error("BchCode: t out of range");

    // Roots of g are the union of cyclotomic cosets of 1..2t.
    std::set<unsigned> roots;
    for (unsigned i = 1; i <= 2 * t; ++i) {
        unsigned e = i % n_;
        while (roots.insert(e).second) e = (2 * e) % n_;
    }
    if (roots.size() >= n_) throw Error("BchCode: no message bits left for this t");

    std::vector<GfElem> g{1};
    for (unsigned r : roots) {
        const GfElem a = gf_.exp(r);
        std::vector<GfElem> next(g.size() + 1, 0);
        for (std::size_t j = 0; j < g.size(); ++j) {
            next[j + 1] ^= g[j];
            next[j] ^= gf_.mul(g[j], a);
        }
        g = std::move(next);
    }
    generator_.resize(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (g[j] > 1) throw Error("BchCode: generator is not binary");
        generator_[j] = static_cast<std::uint8_t>(g[j]);
    }
    k_ = n_ - (generator_.size() - 1);
}

Bits BchCode::encode(const Bits& message) const {
    if (message.size() != k_) throw Error("BchCode::encode: message length must be " + std::to_string(k_));
    const std::size_t r = n_ - k_;
    std::vector<std::uint8_t> rem(r, 0);
    for (std::size_t j = 0; j < k_; ++j) {
        const std::uint8_t fb = message[j] ^ rem[r - 1];
        for (std::size_t i = r - 1; i > 0; --i) rem[i] = rem[i - 1] ^ (fb & generator_[i]);
        rem[0] = fb & generator_[0];
    }
    Bits cw(n_);
    for (std::size_t j = 0; j < k_; ++j) cw[j] = message[j];
    for (std::size_t i = 0; i < r; ++i) cw[k_ + i] = rem[r - 1 - i];
    return cw;
}

std::vector<GfElem> BchCode::syndromes(const Bits& received) const {
    std::vector<GfElem> s(2 * t_, 0);
    for (std::size_t p = 0; p < n_; ++p) {
        if (!received[p]) continue;
        const long power = static_cast<long>(n_ - 1 - p);
        for (unsigned j = 1; j <= 2 * t_; ++j) s[j - 1] ^= gf_.exp(power * j);
    }
    return s;
}

std::optional<Bits> BchCode::correct(const Bits& received) const {
    if (received.size() != n_) throw Error("BchCode::decode: received length must be " + std::to_string(n_));
    const auto s = syndromes(received);
    if (std::all_of(s.begin(), s.end(), [](GfElem v) { return v == 0; })) return received;

    const auto locator = berlekamp_massey(gf_, s);
    const std::size_t degree = locator.size() - 1;
    if (degree == 0 || degree > t_) return std::nullopt;

    // Chien search: an error at power i makes alpha^-i a root.
    Bits out = received;
    std::size_t found = 0;
    for (std::size_t i = 0; i < n_; ++i) {
        if (poly_eval(gf_, locator, gf_.exp(-static_cast<long>(i))) == 0) {
            out.flip(n_ - 1 - i);
            ++found;
        }
    }
    if (found != degree) return std::nullopt;
    const auto check = syndromes(out);
    if (!std::all_of(check.begin(), check.end(), [](GfElem v) { return v == 0; })) return std::nullopt;
    return out;
}

std::optional<Bits> BchCode::decode(const Bits& received) const {
    auto cw = correct(received);
    if (!cw) return std::nullopt;
    return cw->slice(0, k_);
}

}  // namespace risecure
