#include "doctest.h"

#include "risecure/code_spec.hpp"
#include "risecure/error.hpp"
#include "risecure/gf.hpp"
#include "risecure/rng.hpp"

#include <algorithm>
#include <set>

using namespace risecure;

namespace {

// Shift-and-add multiply, reduced by the field polynomial. Shares nothing with
// the table-driven field.
unsigned slow_mul(unsigned a, unsigned b, unsigned m, unsigned poly) {
    unsigned r = 0;
    while (b) {
        if (b & 1) r ^= a;
        b >>= 1;
        a <<= 1;
        if (a & (1U << m)) a ^= poly;
    }
    return r;
}

unsigned slow_pow(unsigned a, unsigned long e, unsigned m, unsigned poly) {
    unsigned r = 1;
    while (e--) r = slow_mul(r, a, m, poly);
    return r;
}

// alpha^i by repeated multiplication by x.
unsigned slow_alpha(unsigned long i, unsigned m, unsigned poly) { return slow_pow(2, i % ((1UL << m) - 1), m, poly); }

// Evaluates the binary polynomial with coefficient bit p <-> x^(n-1-p) at a.
unsigned eval_word(const Bits& w, unsigned a, unsigned m, unsigned poly) {
    unsigned acc = 0;
    for (std::size_t p = 0; p < w.size(); ++p) acc = slow_mul(acc, a, m, poly) ^ w[p];
    return acc;
}

// Remainder of a binary polynomial (ascending) modulo g (ascending).
std::vector<std::uint8_t> gf2_mod(std::vector<std::uint8_t> a, const std::vector<std::uint8_t>& g) {
    const std::size_t dg = g.size() - 1;
    for (std::size_t i = a.size(); i-- > dg;) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j <= dg; ++j) a[i - dg + j] ^= g[j];
    }
    a.resize(dg);
    return a;
}

Bits random_bits(Stream& rng, std::size_t n) {
    Bits b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = rng.bit();
    return b;
}

std::vector<std::size_t> distinct_positions(Stream& rng, std::size_t n, std::size_t count) {
    std::set<std::size_t> s;
    while (s.size() < count) s.insert(rng.below(n));
    return {s.begin(), s.end()};
}

}  // namespace

TEST_CASE("field arithmetic agrees with shift-and-add multiplication") {
    for (auto [m, poly] : {std::pair{4U, 0x13U}, {7U, 0x89U}, {8U, 0x11DU}}) {
        const GaloisField gf(m, poly);
        const unsigned q = 1U << m;
        for (unsigned a = 0; a < q; ++a) {
            for (unsigned b = 0; b < q; ++b) REQUIRE(gf.mul(a, b) == slow_mul(a, b, m, poly));
            if (a) CHECK(slow_mul(a, gf.inv(a), m, poly) == 1);
        }
        for (unsigned i = 0; i < gf.group_order(); ++i) CHECK(gf.exp(i) == slow_alpha(i, m, poly));
        CHECK(gf.exp(-1) == gf.inv(2));
    }
}

TEST_CASE("non-primitive polynomial is rejected") {
    // x^4 + x^3 + x^2 + x + 1 is irreducible but alpha has order 5.
    CHECK_THROWS_AS(GaloisField(4, 0x1F), Error);
    CHECK_THROWS_AS(GaloisField(8, 0x11B), Error);  // AES polynomial: x is not a generator
}

TEST_CASE("BCH(127,36,15) generator") {
    const auto& bch = *CodeSpec::default_bch().bch_codec();
    CHECK(bch.n() == 127);
    CHECK(bch.k() == 36);
    CHECK(bch.t() == 15);
    const auto& g = bch.generator();
    REQUIRE(g.size() == 92);
    CHECK(g.front() == 1);
    CHECK(g.back() == 1);

    // g divides x^127 - 1.
    std::vector<std::uint8_t> x127(128, 0);
    x127[0] = 1;
    x127[127] = 1;
    const auto rem = gf2_mod(x127, g);
    CHECK(std::all_of(rem.begin(), rem.end(), [](auto v) { return v == 0; }));

    // alpha^1..alpha^30 are roots.
    for (unsigned i = 1; i <= 30; ++i) {
        unsigned acc = 0;
        for (std::size_t j = g.size(); j-- > 0;) acc = slow_mul(acc, slow_alpha(i, 7, 0x89), 7, 0x89) ^ g[j];
        CHECK(acc == 0);
    }
}

TEST_CASE("BCH codewords vanish at the designed roots") {
    const auto code = CodeSpec::default_bch();
    Stream rng("test-bch-roots", {1});
    for (int trial = 0; trial < 50; ++trial) {
        const Bits msg = random_bits(rng, 36);
        const Bits cw = code.encode(msg);
        REQUIRE(cw.size() == 127);
        CHECK(cw.slice(0, 36) == msg);
        for (unsigned i = 1; i <= 30; ++i) CHECK(eval_word(cw, slow_alpha(i, 7, 0x89), 7, 0x89) == 0);
    }
}

TEST_CASE("BCH(15,7,2) exhaustive: linear, distance 5, corrects all weight <= 2 patterns") {
    const auto code = CodeSpec::bch(4, 2);
    REQUIRE(code.n() == 15);
    REQUIRE(code.k() == 7);
    std::size_t min_weight = 15;
    for (unsigned a = 0; a < 128; ++a) {
        const Bits ca = code.encode(Bits::from_u64(a, 7));
        if (a) min_weight = std::min(min_weight, ca.popcount());
        for (unsigned b = 0; b < 128; b += 9) {
            CHECK((ca ^ code.encode(Bits::from_u64(b, 7))) == code.encode(Bits::from_u64(a ^ b, 7)));
        }
        for (std::size_t i = 0; i < 15; ++i) {
            for (std::size_t j = i; j < 15; ++j) {
                Bits r = ca;
                r.flip(i);
                if (j != i) r.flip(j);
                const auto d = code.decode(r);
                REQUIRE(d.has_value());
                REQUIRE(d->to_u64() == a);
            }
        }
    }
    CHECK(min_weight == 5);
}

TEST_CASE("BCH(127,36) corrects every pattern of weight <= 2") {
    const auto code = CodeSpec::default_bch();
    Stream rng("test-bch-w2", {});
    const Bits msg = random_bits(rng, 36);
    const Bits cw = code.encode(msg);
    REQUIRE(code.decode(cw) == msg);
    for (std::size_t i = 0; i < 127; ++i) {
        for (std::size_t j = i; j < 127; ++j) {
            Bits r = cw;
            r.flip(i);
            if (j != i) r.flip(j);
            REQUIRE(code.decode(r) == msg);
        }
    }
}

TEST_CASE("BCH(127,36) random errors up to t and beyond") {
    const auto code = CodeSpec::default_bch();
    Stream rng("test-bch-t", {});
    for (int trial = 0; trial < 300; ++trial) {
        const Bits msg = random_bits(rng, 36);
        const Bits cw = code.encode(msg);
        const std::size_t weight = 1 + rng.below(15);
        Bits r = cw;
        for (auto p : distinct_positions(rng, 127, weight)) r.flip(p);
        REQUIRE(code.decode(r) == msg);
    }
    // With t+1 errors the decoded word must lie within t of the received word,
    // so it can never be the transmitted codeword.
    int failures = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const Bits msg = random_bits(rng, 36);
        Bits r = code.encode(msg);
        for (auto p : distinct_positions(rng, 127, 16)) r.flip(p);
        const auto d = code.decode(r);
        CHECK(d != msg);
        if (!d) ++failures;
        else CHECK(hamming_distance(code.encode(*d), r) <= 15);
    }
    CHECK(failures > 0);
}

TEST_CASE("RS(255,223,16) generator roots and codeword roots") {
    const auto code = CodeSpec::default_rs();
    const auto& rs = *code.rs_codec();
    CHECK(rs.n() == 255);
    CHECK(rs.k() == 223);
    const auto& g = rs.generator();
    REQUIRE(g.size() == 33);
    CHECK(g.back() == 1);
    for (unsigned i = 1; i <= 32; ++i) {
        const unsigned a = slow_alpha(i, 8, 0x11D);
        unsigned acc = 0;
        for (std::size_t j = g.size(); j-- > 0;) acc = slow_mul(acc, a, 8, 0x11D) ^ g[j];
        CHECK(acc == 0);
    }
    Stream rng("test-rs-roots", {});
    std::vector<std::uint8_t> msg(223);
    for (auto& s : msg) s = static_cast<std::uint8_t>(rng.below(256));
    const auto cw = rs.encode(msg);
    CHECK(std::equal(msg.begin(), msg.end(), cw.begin()));
    for (unsigned i = 1; i <= 32; ++i) {
        const unsigned a = slow_alpha(i, 8, 0x11D);
        unsigned acc = 0;
        for (auto s : cw) acc = slow_mul(acc, a, 8, 0x11D) ^ s;
        CHECK(acc == 0);
    }
}

TEST_CASE("RS corrects up to t symbol errors, including parity symbols") {
    const auto& rs = *CodeSpec::default_rs().rs_codec();
    Stream rng("test-rs-t", {});
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::uint8_t> msg(223);
        for (auto& s : msg) s = static_cast<std::uint8_t>(rng.below(256));
        const auto cw = rs.encode(msg);
        auto r = cw;
        const std::size_t weight = trial == 0 ? 0 : 1 + rng.below(16);
        for (auto p : distinct_positions(rng, 255, weight)) r[p] ^= static_cast<std::uint8_t>(1 + rng.below(255));
        const auto d = rs.decode(r);
        REQUIRE(d.has_value());
        REQUIRE(*d == msg);
    }
    // Errors confined to the parity tail.
    std::vector<std::uint8_t> msg(223, 0x5A);
    auto r = rs.encode(msg);
    for (std::size_t p = 255 - 16; p < 255; ++p) r[p] ^= 0xFF;
    CHECK(rs.decode(r) == msg);
}

TEST_CASE("RS(15,11,2) over GF(16): every single and double symbol error") {
    const auto code = CodeSpec::rs(4, 2);
    const auto& rs = *code.rs_codec();
    REQUIRE(rs.k() == 11);
    std::vector<std::uint8_t> msg{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    const auto cw = rs.encode(msg);
    for (std::size_t i = 0; i < 15; ++i) {
        for (std::size_t j = i + 1; j < 15; ++j) {
            for (std::uint8_t ei = 1; ei < 16; ei += 4) {
                for (std::uint8_t ej = 1; ej < 16; ej += 5) {
                    auto r = cw;
                    r[i] ^= ei;
                    r[j] ^= ej;
                    REQUIRE(rs.decode(r) == msg);
                }
            }
        }
    }
}

TEST_CASE("RS bit view: one flipped bit per symbol costs one symbol") {
    const auto code = CodeSpec::default_rs();
    CHECK(code.n_bits() == 2040);
    CHECK(code.k_bits() == 1784);
    Stream rng("test-rs-bits", {});
    const Bits msg = random_bits(rng, code.k_bits());
    const Bits cw = code.encode(msg);
    CHECK(unpack_symbols(pack_symbols(cw)) == cw);
    Bits r = cw;
    for (auto s : distinct_positions(rng, 255, 16)) r.flip(8 * s + rng.below(8));
    CHECK(code.decode(r) == msg);
    // Eight flips inside one symbol are still one symbol error.
    Bits r2 = cw;
    for (std::size_t b = 0; b < 8; ++b) r2.flip(8 * 7 + b);
    CHECK(code.decode(r2) == msg);
}

TEST_CASE("code ids") {
    CHECK(CodeSpec::from_id("bch").id() == "bch-127-36-15");
    CHECK(CodeSpec::from_id("rs").id() == "rs-255-223-16");
    CHECK(CodeSpec::from_id("bch-127-36-15") == CodeSpec::default_bch());
    CHECK(CodeSpec::from_id("rs-255-223-16") == CodeSpec::default_rs());
    CHECK(CodeSpec::from_id("bch-15-7-2").k() == 7);
    CHECK_THROWS_AS(CodeSpec::from_id("bch-127-40-15"), Error);
    CHECK_THROWS_AS(CodeSpec::from_id("bch-100-36-15"), Error);
    CHECK_THROWS_AS(CodeSpec::from_id("ldpc"), Error);
    CHECK_THROWS_AS(CodeSpec::from_id("rs-255-223"), Error);
}

TEST_CASE("length checks") {
    const auto code = CodeSpec::default_bch();
    CHECK_THROWS_AS(code.encode(Bits(35)), Error);
    CHECK_THROWS_AS(code.decode(Bits(128)), Error);
    const auto rs = CodeSpec::default_rs();
    CHECK_THROWS_AS(rs.encode(Bits(1783)), Error);
    CHECK_THROWS_AS(rs.decode(Bits(2039)), Error);
}

TEST_CASE("corrupted decoder is observable") {
    const auto code = CodeSpec::default_bch();
    const auto bad = code.with_corrupted_decode();
    const Bits msg = Bits::from_u64(0x123456789, 36);
    CHECK(bad.decode(code.encode(msg)) != msg);
    CHECK(bad.decode_corrupted());
    CHECK_FALSE(code.decode_corrupted());
}
