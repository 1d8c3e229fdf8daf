#include "doctest.h"

#include "risecure/error.hpp"
#include "risecure/fuzzy_extractor.hpp"
#include "risecure/hash_extension.hpp"
#include "risecure/system.hpp"

#include <set>

using namespace risecure;

TEST_CASE("enrollment: helper is codeword xor R1 and R2 is the enrolled read") {
    const auto code = CodeSpec::default_bch();
    const auto puf = PufInstance::create(4, SramParams{});
    const auto c0 = Challenge::from_u64(12);
    const auto e = enroll(puf, c0, code, 77);
    const auto r1 = enrollment_read(puf, c0, 77);
    CHECK(e.response.bits == r1.bits);
    CHECK(e.helper.code_id == "bch-127-36-15");
    CHECK((e.helper.aux ^ r1.bits) == code.encode(enrollment_secret(code, 77)));
    CHECK(recover(r1, e.helper, code) == e.response);

    const auto again = enroll(puf, c0, code, 77);
    CHECK(again.helper == e.helper);
    CHECK(enroll(puf, c0, code, 78).helper != e.helper);
}

TEST_CASE("enrollment read is the bitwise majority of independent reads") {
    const auto puf = PufInstance::create(4, SramParams{});
    const auto c0 = Challenge::from_u64(200);
    for (std::size_t reads : {1UL, 3UL, 11UL}) {
        const auto maj = enrollment_read(puf, c0, 5, reads);
        for (std::size_t i = 0; i < 127; ++i) {
            std::size_t ones = 0;
            for (std::size_t j = 0; j < reads; ++j) ones += puf.eval_raw(c0, enrollment_read_seed(5, j)).bits[i];
            REQUIRE(maj.bits[i] == (2 * ones > reads));
        }
    }
    CHECK_THROWS_AS(enrollment_read(puf, c0, 5, 4), Error);
    // Eleven reads at p = 0.05 leave the enrolled value almost always at the reference.
    std::size_t diff = 0;
    for (std::uint64_t blk = 0; blk < 256; ++blk) {
        const auto c = Challenge::from_u64(blk);
        diff += hamming_distance(enrollment_read(puf, c, blk).bits, puf.reference_response(c).bits);
    }
    CHECK(diff <= 3);
}

TEST_CASE("every error pattern up to t recovers R2 exactly; t+1 never does") {
    const auto code = CodeSpec::default_bch();
    const auto puf = PufInstance::create(8, SramParams{});
    const auto e = enroll(puf, Challenge::from_u64(3), code, 1);
    Stream rng("test-fe-patterns", {});
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t weight = trial % 17;
        std::set<std::size_t> pos;
        while (pos.size() < weight) pos.insert(rng.below(127));
        RawResponse noisy{e.response.bits};
        for (auto p : pos) noisy.bits.flip(p);
        const auto r2 = recover(noisy, e.helper, code);
        if (weight <= 15) {
            REQUIRE(r2 == e.response);
        } else {
            CHECK(r2 != e.response);
        }
    }
}

TEST_CASE("reconstruction over noisy SRAM reads") {
    const auto code = CodeSpec::default_bch();
    const auto puf = PufInstance::create(15, SramParams{256, 127, 0.05});
    int ok = 0;
    const int cycles = 1000;
    for (int i = 0; i < cycles; ++i) {
        const auto c0 = Challenge::from_u64(static_cast<std::uint64_t>(i) % 256);
        const auto e = enroll(puf, c0, code, static_cast<std::uint64_t>(i));
        const auto r2 = reconstruct(puf, c0, e.helper, code, 1'000'000 + static_cast<std::uint64_t>(i));
        if (r2) {
            ++ok;
            REQUIRE(*r2 == e.response);
        }
    }
    CHECK(ok >= 995);
}

TEST_CASE("RS code-offset with a low-noise SRAM") {
    const auto code = CodeSpec::default_rs();
    const auto puf = default_puf(PufKind::sram, 2, code);
    CHECK(puf.response_bits() == 2040);
    for (std::uint64_t i = 0; i < 50; ++i) {
        const auto c0 = Challenge::from_u64(i);
        const auto e = enroll(puf, c0, code, i);
        const auto r2 = reconstruct(puf, c0, e.helper, code, 500 + i);
        REQUIRE(r2.has_value());
        CHECK(*r2 == e.response);
    }
}

TEST_CASE("arbiter-kind PUFs feed the same extractor") {
    const auto code = CodeSpec::default_bch();
    const auto puf = PufInstance::create(3, ArbiterParams{64, 0.3, 127});
    const auto c0 = Challenge::from_u64(0xABCDEF);
    const auto e = enroll(puf, c0, code, 5);
    for (std::uint64_t s = 0; s < 20; ++s) CHECK(reconstruct(puf, c0, e.helper, code, s) == e.response);
}

TEST_CASE("mismatched helper data is rejected") {
    const auto bch = CodeSpec::default_bch();
    const auto puf = PufInstance::create(1, SramParams{});
    const auto e = enroll(puf, Challenge::from_u64(0), bch, 0);
    CHECK_THROWS_AS(recover(RawResponse{Bits(127)}, e.helper, CodeSpec::bch(7, 10)), Error);
    HelperData shortened{e.helper.code_id, e.helper.aux.slice(0, 126)};
    CHECK_THROWS_AS(recover(RawResponse{Bits(127)}, shortened, bch), Error);
    CHECK_THROWS_AS(recover(RawResponse{Bits(126)}, e.helper, bch), Error);
    CHECK_THROWS_AS(enroll(puf, Challenge::from_u64(0), CodeSpec::default_rs(), 0), Error);
}

TEST_CASE("output mux") {
    const auto code = CodeSpec::default_bch();
    const auto puf = PufInstance::create(6, SramParams{});
    const auto c0 = Challenge::from_u64(9);
    const auto e = enroll(puf, c0, code, 2);
    const OuterChallenge outer{Bits::from_hex("00112233445566778899aabbccddeeff", 128)};

    OutputRequest req{OutputMode::raw, c0, 44, std::nullopt, std::nullopt};
    CHECK(std::get<RawResponse>(select_output(puf, code, req)) == puf.eval_raw(c0, 44));

    req.mode = OutputMode::corrected;
    CHECK_THROWS_AS(select_output(puf, code, req), Error);  // no helper
    req.helper = e.helper;
    CHECK(std::get<StableResponse>(select_output(puf, code, req)) == e.response);

    req.mode = OutputMode::hashed;
    CHECK_THROWS_AS(select_output(puf, code, req), Error);  // no C
    req.outer = outer;
    const auto r3 = std::get<FinalResponse>(select_output(puf, code, req));
    CHECK(r3 == compose_response(e.response, outer, 127));
    CHECK(to_hex(select_output(puf, code, req)) == r3.hex());

    // A read too noisy to decode surfaces as ReconstructFailure.
    HelperData garbage{e.helper.code_id, e.helper.aux};
    for (std::size_t i = 0; i < 127; i += 3) garbage.aux.flip(i);
    req.helper = garbage;
    CHECK_THROWS_AS(select_output(puf, code, req), ReconstructFailure);
}
