#include "risecure/fuzzy_extractor.hpp"

#include "risecure/error.hpp"

namespace risecure {

Bits enrollment_secret(const CodeSpec& code, std::uint64_t rng_seed) {
    Stream rng("enroll-secret", {rng_seed});
    Bits r(code.k_bits());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = rng.bit();
    return r;
}

std::uint64_t enrollment_read_seed(std::uint64_t rng_seed, std::size_t read) noexcept {
    return derive_key("enroll-read", {rng_seed, read});
}

RawResponse enrollment_read(const PufInstance& puf, const Challenge& c0, std::uint64_t rng_seed, std::size_t reads) {
    if (reads == 0 || reads % 2 == 0) throw Error("enrollment read count must be odd");
    if (reads == 1) return puf.eval_raw(c0, enrollment_read_seed(rng_seed, 0));
    std::vector<std::size_t> ones(puf.response_bits(), 0);
    for (std::size_t j = 0; j < reads; ++j) {
        const auto r = puf.eval_raw(c0, enrollment_read_seed(rng_seed, j));
        for (std::size_t i = 0; i < ones.size(); ++i) ones[i] += r.bits[i];
    }
    RawResponse out{Bits(ones.size())};
    for (std::size_t i = 0; i < ones.size(); ++i) out.bits[i] = ones[i] > reads / 2;
    return out;
}

Enrollment enroll_read(const RawResponse& r1, const CodeSpec& code, std::uint64_t rng_seed) {
    if (r1.bits.size() != code.n_bits()) {
        throw Error("enroll: raw response has " + std::to_string(r1.bits.size()) + " bits but " + code.id() +
                    " needs " + std::to_string(code.n_bits()));
    }
    const Bits codeword = code.encode(enrollment_secret(code, rng_seed));
    return {HelperData{code.id(), codeword ^ r1.bits}, StableResponse{r1.bits}};
}

Enrollment enroll(const PufInstance& puf, const Challenge& c0, const CodeSpec& code, std::uint64_t rng_seed,
                  std::size_t reads) {
    if (puf.response_bits() != code.n_bits()) {
        throw Error("enroll: PUF response width " + std::to_string(puf.response_bits()) + " does not match " +
                    code.id());
    }
    return enroll_read(enrollment_read(puf, c0, rng_seed, reads), code, rng_seed);
}

std::optional<StableResponse> recover(const RawResponse& r1_prime, const HelperData& helper, const CodeSpec& code) {
    if (helper.code_id != code.id()) throw Error("helper data is for " + helper.code_id + ", not " + code.id());
    if (helper.aux.size() != code.n_bits() || r1_prime.bits.size() != code.n_bits()) {
        throw Error("reconstruct: width mismatch with " + code.id());
    }
    const auto message = code.decode(helper.aux ^ r1_prime.bits);
    if (!message) return std::nullopt;
    return StableResponse{code.encode(*message) ^ helper.aux};
}

std::optional<StableResponse> reconstruct(const PufInstance& puf, const Challenge& c0, const HelperData& helper,
                                          const CodeSpec& code, std::uint64_t noise_seed) {
    return recover(puf.eval_raw(c0, noise_seed), helper, code);
}

}  // namespace risecure
