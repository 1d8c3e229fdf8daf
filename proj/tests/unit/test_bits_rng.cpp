#include "doctest.h"

#include "risecure/bits.hpp"
#include "risecure/error.hpp"
#include "risecure/rng.hpp"

#include <cmath>
#include <set>

using namespace risecure;

TEST_CASE("Bits packing is MSB first") {
    const Bits b = Bits::from_u64(0b1011, 4);
    CHECK(b[0] == 1);
    CHECK(b[1] == 0);
    CHECK(b.to_u64() == 0b1011);
    CHECK(b.to_hex() == "b0");
    CHECK(Bits::from_u64(0xABCD, 16).to_bytes() == std::vector<std::uint8_t>{0xAB, 0xCD});
    CHECK(Bits::from_u64(0x1FF, 8).to_u64() == 0xFF);

    const Bits seven = Bits::from_hex("fe", 7);
    CHECK(seven.popcount() == 7);
    CHECK_THROWS_AS(Bits::from_hex("ff", 7), Error);  // padding bit set
    CHECK_THROWS_AS(Bits::from_hex("ff", 9), Error);  // too few bytes
    CHECK_THROWS_AS(Bits::from_hex("fg", 8), Error);
    CHECK(Bits::from_hex("0xA5", 8).to_u64() == 0xA5);
    CHECK_THROWS_AS(Bits(65).to_u64(), Error);
}

TEST_CASE("Bits round trips and algebra") {
    Stream rng("test-bits", {});
    for (std::size_t n : {1UL, 7UL, 8UL, 127UL, 2040UL}) {
        Bits a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = rng.bit();
            b[i] = rng.bit();
        }
        CHECK(Bits::from_bytes(a.to_bytes(), n) == a);
        CHECK(Bits::from_hex(a.to_hex(), n) == a);
        CHECK(((a ^ b) ^ b) == a);
        CHECK(hamming_distance(a, b) == (a ^ b).popcount());
        CHECK(a.concat(b).slice(n, n) == b);
        CHECK(a.concat(b).slice(0, n) == a);
    }
    CHECK_THROWS_AS(Bits(3) ^ Bits(4), Error);
    CHECK_THROWS_AS(Bits(3).slice(2, 2), Error);
}

TEST_CASE("streams are deterministic and domain separated") {
    Stream a("tag", {1, 2}), b("tag", {1, 2}), c("tag", {1, 3}), d("other", {1, 2});
    std::set<std::uint64_t> firsts;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next();
        CHECK(x == b.next());
        firsts.insert(x);
    }
    CHECK(firsts.size() == 100);
    CHECK(Stream("tag", {1, 2}).next() != c.next());
    CHECK(Stream("tag", {1, 2}).next() != d.next());
    CHECK(derive_key("x", {1, 2}) != derive_key("x", {2, 1}));
}

TEST_CASE("stream distributions") {
    Stream rng("test-dist", {});
    const int n = 200000;
    double sum = 0, sumsq = 0, usum = 0;
    int bits = 0;
    std::vector<int> buckets(10, 0);
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sumsq += z * z;
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        usum += u;
        bits += rng.bit();
        ++buckets[rng.below(10)];
    }
    CHECK(std::abs(sum / n) < 0.015);
    CHECK(sumsq / n == doctest::Approx(1.0).epsilon(0.015));
    CHECK(usum / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(std::abs(bits - n / 2) < 4 * std::sqrt(n / 4.0));
    for (int k : buckets) CHECK(std::abs(k - n / 10) < 4 * std::sqrt(n * 0.09));
}
