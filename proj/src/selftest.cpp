#include "risecure/selftest.hpp"

#include "risecure/ise.hpp"
#include "risecure/lookaside_buffer.hpp"

#include <functional>

namespace risecure {

namespace {

Bits random_bits(Stream& rng, std::size_t n) {
    Bits b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = rng.bit();
    return b;
}

void flip_distinct(Stream& rng, Bits& word, std::size_t count) {
    std::vector<std::size_t> idx(word.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + rng.below(idx.size() - i);
        std::swap(idx[i], idx[j]);
        word.flip(idx[i]);
    }
}

std::string ecc_at_capability(const CodeSpec& code, std::uint64_t seed, std::size_t trials) {
    Stream rng("selftest-ecc", {seed});
    const bool rs = code.variant() == CodeVariant::rs;
    for (std::size_t t = 0; t < trials; ++t) {
        const Bits msg = random_bits(rng, code.k_bits());
        Bits word = code.encode(msg);
        if (rs) {
            // one flipped bit in each of t distinct symbols
            Bits sym_mask(code.n());
            flip_distinct(rng, sym_mask, code.t());
            for (std::size_t s = 0; s < code.n(); ++s) {
                if (sym_mask[s]) word.flip(8 * s + rng.below(8));
            }
        } else {
            flip_distinct(rng, word, code.t());
        }
        const auto got = code.decode(word);
        if (!got) return "decode failure at trial " + std::to_string(t);
        if (!(*got == msg)) return "wrong message at trial " + std::to_string(t);
    }
    return {};
}

}  // namespace

std::vector<SelftestResult> run_selftest(const SelftestOptions& opt) {
    std::vector<SelftestResult> results;
    auto check = [&](std::string name, const std::function<std::string()>& body) {
        SelftestResult r{std::move(name), false, {}};
        try {
            r.detail = body();
            r.passed = r.detail.empty();
        } catch (const std::exception& e) {
            r.detail = std::string("exception: ") + e.what();
        }
        results.push_back(std::move(r));
    };

    CodeSpec bch = CodeSpec::default_bch();
    CodeSpec rs = CodeSpec::default_rs();
    if (opt.inject_decode_fault) {
        bch = bch.with_corrupted_decode();
        rs = rs.with_corrupted_decode();
    }

    check("bch_corrects_t_errors", [&] { return ecc_at_capability(bch, opt.seed, 50); });
    check("rs_corrects_t_symbol_errors", [&] { return ecc_at_capability(rs, opt.seed + 1, 10); });

    check("fuzzy_extractor_identity", [&]() -> std::string {
        const auto puf = PufInstance::create(opt.seed, SramParams{4, bch.n_bits(), 0.0});
        const auto c0 = Challenge::from_u64(2);
        const auto e = enroll(puf, c0, bch, opt.seed);
        const auto r2 = reconstruct(puf, c0, e.helper, bch, opt.seed + 99);
        if (!r2) return "reconstruction failed";
        if (!(*r2 == e.response)) return "R2 differs from enrollment";
        return {};
    });

    check("sha3_256_known_answer", [] {
        const std::string abc = "abc";
        const auto d = sha3_256(std::span(reinterpret_cast<const std::uint8_t*>(abc.data()), abc.size()));
        const std::string want = "3a985da74fe225b2045c172d6bd390bd855f086e3e9d525b46bfe24511431532";
        return to_hex(d) == want ? std::string{} : "got " + to_hex(d);
    });

    check("sha2_256_known_answer", [] {
        const std::string abc = "abc";
        const auto d = sha2_256(std::span(reinterpret_cast<const std::uint8_t*>(abc.data()), abc.size()));
        const std::string want = "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad";
        return to_hex(d) == want ? std::string{} : "got " + to_hex(d);
    });

    check("lookaside_fifo_eviction", []() -> std::string {
        LookasideBuffer buf(4);
        for (std::uint64_t k = 1; k <= 5; ++k) buf.insert({0, Challenge::from_u64(k)}, {});
        if (buf.lookup({0, Challenge::from_u64(1)}) != nullptr) return "oldest key survived";
        if (buf.counters().evictions != 1) return "eviction count";
        return {};
    });

    check("custom_opcode_vectors", []() -> std::string {
        const auto a = isa::decode(0x0002952BU);
        const auto b = isa::decode(0x0062A52BU);
        if (!a || !std::holds_alternative<isa::InnerPufInit>(a->instr)) return "0x0002952B";
        if (!b || !std::holds_alternative<isa::OuterPufChal>(b->instr)) return "0x0062A52B";
        const auto& init = std::get<isa::InnerPufInit>(a->instr);
        const auto& chal = std::get<isa::OuterPufChal>(b->instr);
        if (init.rs1 != 5 || init.rd != 10) return "inner_puf_init fields";
        if (chal.rs1 != 5 || chal.rs2 != 6 || chal.rd != 10) return "outer_puf_chal fields";
        return {};
    });

    check("parity_features", []() -> std::string {
        const auto phi = parity_features(Challenge{Bits(std::vector<std::uint8_t>{1, 0, 1, 0})}, 4);
        const std::vector<double> want{1, -1, -1, 1, 1};
        return phi == want ? std::string{} : "unexpected feature vector";
    });

    return results;
}

}  // namespace risecure
