#include "risecure/puf.hpp"

#include "risecure/error.hpp"

#include <cmath>
#include <string>

namespace risecure {

namespace {

std::uint64_t fold_challenge(const Challenge& c) {
    std::uint64_t h = mix64(c.width());
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < c.width(); ++i) {
        word = (word << 1) | c.bits[i];
        if (i % 64 == 63 || i + 1 == c.width()) {
            h = mix64(h ^ word);
            word = 0;
        }
    }
    return h;
}

void validate(const SramParams& p) {
    if (p.num_blocks == 0) throw Error("sram: num_blocks must be positive");
    if (p.block_bits == 0) throw Error("sram: block_bits must be positive");
    if (!(p.flip_prob >= 0.0 && p.flip_prob < 0.5)) throw Error("sram: flip probability must be in [0, 0.5)");
}

void validate_arbiter(std::size_t stages, double sigma, std::size_t response_bits) {
    if (stages == 0) throw Error("arbiter: stage count must be positive");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw Error("arbiter: noise sigma must be finite and >= 0");
    if (response_bits == 0) throw Error("arbiter: response_bits must be positive");
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string_view to_string(PufKind kind) noexcept {
    switch (kind) {
        case PufKind::sram: return "sram";
        case PufKind::arbiter: return "arbiter";
        case PufKind::xor_arbiter: return "xor";
    }
    return "?";
}

PufKind parse_puf_kind(std::string_view name) {
    if (name == "sram") return PufKind::sram;
    if (name == "arbiter") return PufKind::arbiter;
    if (name == "xor") return PufKind::xor_arbiter;
    throw Error("unknown PUF kind: " + std::string(name));
}

std::vector<double> parity_features(const Challenge& c, std::size_t stages) {
    if (c.width() != stages) {
        throw Error("parity_features: challenge width " + std::to_string(c.width()) + " != stages " +
                    std::to_string(stages));
    }
    std::vector<double> phi(stages + 1, 1.0);
    double acc = 1.0;
    for (std::size_t i = stages; i-- > 0;) {
        acc *= c.bits[i] ? -1.0 : 1.0;
        phi[i] = acc;
    }
    return phi;
}

Challenge expand_challenge(const Challenge& c0, std::size_t index, std::size_t stages) {
    const std::uint64_t base = fold_challenge(c0);
    Challenge out{Bits(stages)};
    std::uint64_t word = 0;
    for (std::size_t b = 0; b < stages; ++b) {
        if (b % 64 == 0) word = mix64(base ^ mix64(index * 0x9E3779B97F4A7C15ULL + b / 64));
        out.bits[b] = static_cast<std::uint8_t>((word >> (63 - b % 64)) & 1U);
    }
    return out;
}

ArbiterChain::ArbiterChain(std::uint64_t seed, std::size_t stages, double noise_sigma)
    : weights_(stages + 1), sigma_(noise_sigma) {
    Stream rng("arbiter-weights", {seed, stages});
    for (auto& w : weights_) w = rng.normal();
}

double ArbiterChain::delay(std::span<const double> features) const noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) acc += weights_[i] * features[i];
    return acc;
}

bool ArbiterChain::eval(std::span<const double> features, Stream& noise) const noexcept {
    const double eps = sigma_ * noise.normal();
    return delay(features) + eps > 0.0;
}

PufInstance::PufInstance(std::uint64_t seed, PufParams params) : seed_(seed), params_(std::move(params)) {
    std::visit(overloaded{
                   [](const SramParams& p) { validate(p); },
                   [&](const ArbiterParams& p) {
                       validate_arbiter(p.stages, p.noise_sigma, p.response_bits);
                       chains_.emplace_back(seed_, p.stages, p.noise_sigma);
                   },
                   [&](const XorArbiterParams& p) {
                       validate_arbiter(p.stages, p.noise_sigma, p.response_bits);
                       if (p.chains == 0) throw Error("xor: chain count must be positive");
                       for (std::size_t j = 0; j < p.chains; ++j) {
                           chains_.emplace_back(derive_key("xor-chain", {seed_, j}), p.stages, p.noise_sigma);
                       }
                   },
               },
               params_);
}

PufInstance PufInstance::create(std::uint64_t seed, PufParams params) { return PufInstance(seed, std::move(params)); }

PufInstance new_puf(PufKind kind, std::uint64_t seed, PufParams params) {
    const bool ok = (kind == PufKind::sram && std::holds_alternative<SramParams>(params)) ||
                    (kind == PufKind::arbiter && std::holds_alternative<ArbiterParams>(params)) ||
                    (kind == PufKind::xor_arbiter && std::holds_alternative<XorArbiterParams>(params));
    if (!ok) throw Error("new_puf: parameters do not match kind " + std::string(to_string(kind)));
    return PufInstance::create(seed, std::move(params));
}

PufKind PufInstance::kind() const noexcept {
    switch (params_.index()) {
        case 0: return PufKind::sram;
        case 1: return PufKind::arbiter;
        default: return PufKind::xor_arbiter;
    }
}

std::size_t PufInstance::response_bits() const noexcept {
    return std::visit(overloaded{
                          [](const SramParams& p) { return p.block_bits; },
                          [](const ArbiterParams& p) { return p.response_bits; },
                          [](const XorArbiterParams& p) { return p.response_bits; },
                      },
                      params_);
}

std::size_t PufInstance::stages() const {
    if (chains_.empty()) throw Error("stages: not an arbiter-kind PUF");
    return chains_.front().stages();
}

double PufInstance::noise_sigma() const {
    if (chains_.empty()) throw Error("noise_sigma: not an arbiter-kind PUF");
    return chains_.front().noise_sigma();
}

std::uint8_t PufInstance::sram_cell(std::uint64_t seed, std::uint64_t block, std::size_t bit) noexcept {
    const std::uint64_t word = derive_key("sram-cell", {seed, block, bit / 64});
    return static_cast<std::uint8_t>((word >> (63 - bit % 64)) & 1U);
}

std::uint64_t PufInstance::block_index(const Challenge& c0) const {
    if (c0.width() != kInnerChallengeBits) {
        throw Error("inner challenge must be " + std::to_string(kInnerChallengeBits) + " bits");
    }
    const auto& p = std::get<SramParams>(params_);
    const std::uint64_t block = c0.bits.to_u64();
    if (block >= p.num_blocks) {
        throw Error("sram: block index " + std::to_string(block) + " out of range (" + std::to_string(p.num_blocks) +
                    " blocks)");
    }
    return block;
}

bool PufInstance::eval_chains(std::span<const double> features, Stream* noise) const {
    bool bit = false;
    for (const auto& chain : chains_) bit ^= noise ? chain.eval(features, *noise) : chain.eval_noiseless(features);
    return bit;
}

RawResponse PufInstance::eval_raw(const Challenge& c0, std::uint64_t noise_seed) const {
    if (kind() == PufKind::sram) {
        const auto& p = std::get<SramParams>(params_);
        const std::uint64_t block = block_index(c0);
        Stream noise("sram-read", {seed_, noise_seed, block});
        RawResponse r{Bits(p.block_bits)};
        for (std::size_t i = 0; i < p.block_bits; ++i) {
            const bool flip = noise.uniform() < p.flip_prob;
            r.bits[i] = sram_cell(seed_, block, i) ^ static_cast<std::uint8_t>(flip);
        }
        return r;
    }
    if (c0.width() != kInnerChallengeBits) {
        throw Error("inner challenge must be " + std::to_string(kInnerChallengeBits) + " bits");
    }
    Stream noise("arbiter-read", {seed_, noise_seed, fold_challenge(c0)});
    const std::size_t n = response_bits();
    RawResponse r{Bits(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const auto phi = parity_features(expand_challenge(c0, i, stages()), stages());
        r.bits[i] = eval_chains(phi, &noise);
    }
    return r;
}

RawResponse PufInstance::reference_response(const Challenge& c0) const {
    if (kind() == PufKind::sram) {
        const auto& p = std::get<SramParams>(params_);
        const std::uint64_t block = block_index(c0);
        RawResponse r{Bits(p.block_bits)};
        for (std::size_t i = 0; i < p.block_bits; ++i) r.bits[i] = sram_cell(seed_, block, i);
        return r;
    }
    if (c0.width() != kInnerChallengeBits) {
        throw Error("inner challenge must be " + std::to_string(kInnerChallengeBits) + " bits");
    }
    const std::size_t n = response_bits();
    RawResponse r{Bits(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const auto phi = parity_features(expand_challenge(c0, i, stages()), stages());
        r.bits[i] = eval_chains(phi, nullptr);
    }
    return r;
}

bool PufInstance::eval_bit(const Challenge& c, std::uint64_t noise_seed) const {
    if (chains_.empty()) throw Error("eval_bit: SRAM PUFs have no single-bit challenge interface");
    const auto phi = parity_features(c, stages());
    Stream noise("arbiter-bit", {seed_, noise_seed, fold_challenge(c)});
    return eval_chains(phi, &noise);
}

bool PufInstance::reference_bit(const Challenge& c) const {
    if (chains_.empty()) throw Error("reference_bit: SRAM PUFs have no single-bit challenge interface");
    return eval_chains(parity_features(c, stages()), nullptr);
}

PufInstance PufInstance::with_noise_sigma(double sigma) const {
    PufParams p = params_;
    std::visit(overloaded{
                   [](SramParams&) { throw Error("with_noise_sigma: not an arbiter-kind PUF"); },
                   [&](ArbiterParams& a) { a.noise_sigma = sigma; },
                   [&](XorArbiterParams& x) { x.noise_sigma = sigma; },
               },
               p);
    return PufInstance(seed_, std::move(p));
}

namespace {

Challenge reliability_challenge(const PufInstance& puf, std::size_t trial, std::uint64_t seed) {
    if (puf.kind() == PufKind::sram) {
        const auto& p = std::get<SramParams>(puf.params());
        return Challenge::from_u64(trial % p.num_blocks);
    }
    return Challenge::from_u64(derive_key("reliability-c0", {seed, trial}));
}

std::uint64_t reliability_noise_seed(std::size_t trial, std::uint64_t seed) {
    return derive_key("reliability-noise", {seed, trial});
}

// Delay margins and standard-normal draws for every (trial, bit, chain), taken
// in the exact stream order eval_raw uses, so reliability at any sigma can be
// recomputed without re-evaluating the model.
struct DelaySample {
    std::size_t chains = 0;
    std::vector<double> delay;
    std::vector<double> z;
};

DelaySample sample_delays(const PufInstance& puf, std::size_t trials, std::uint64_t seed) {
    DelaySample s;
    s.chains = puf.chains().size();
    const std::size_t n = puf.response_bits();
    const std::size_t stages = puf.stages();
    s.delay.reserve(trials * n * s.chains);
    s.z.reserve(trials * n * s.chains);
    for (std::size_t t = 0; t < trials; ++t) {
        const Challenge c0 = reliability_challenge(puf, t, seed);
        Stream noise("arbiter-read", {puf.seed(), reliability_noise_seed(t, seed), fold_challenge(c0)});
        for (std::size_t i = 0; i < n; ++i) {
            const auto phi = parity_features(expand_challenge(c0, i, stages), stages);
            for (const auto& chain : puf.chains()) {
                s.delay.push_back(chain.delay(phi));
                s.z.push_back(noise.normal());
            }
        }
    }
    return s;
}

double reliability_at(const DelaySample& s, double sigma) {
    const std::size_t bits = s.delay.size() / s.chains;
    std::size_t agree = 0;
    for (std::size_t b = 0; b < bits; ++b) {
        bool ref = false;
        bool noisy = false;
        for (std::size_t j = 0; j < s.chains; ++j) {
            const std::size_t idx = b * s.chains + j;
            ref ^= s.delay[idx] > 0.0;
            noisy ^= s.delay[idx] + sigma * s.z[idx] > 0.0;
        }
        agree += (ref == noisy);
    }
    return static_cast<double>(agree) / static_cast<double>(bits);
}

}  // namespace

double measure_reliability(const PufInstance& puf, std::size_t trials, std::uint64_t seed) {
    if (trials == 0) throw Error("measure_reliability: trials must be positive");
    std::size_t agree = 0;
    std::size_t total = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const Challenge c0 = reliability_challenge(puf, t, seed);
        const auto ref = puf.reference_response(c0);
        const auto noisy = puf.eval_raw(c0, reliability_noise_seed(t, seed));
        agree += ref.bits.size() - hamming_distance(ref.bits, noisy.bits);
        total += ref.bits.size();
    }
    return static_cast<double>(agree) / static_cast<double>(total);
}

double calibrate_sigma(const PufInstance& puf, double target_reliability, std::size_t trials, std::uint64_t seed) {
    if (puf.kind() == PufKind::sram) throw Error("calibrate_sigma: only arbiter-kind PUFs have a delay-noise sigma");
    if (!(target_reliability > 0.5 && target_reliability <= 1.0)) {
        throw Error("calibrate_sigma: target reliability must be in (0.5, 1]");
    }
    if (trials == 0) throw Error("calibrate_sigma: trials must be positive");
    if (target_reliability == 1.0) return 0.0;

    constexpr double kTolerance = 0.002;
    const DelaySample sample = sample_delays(puf, trials, seed);

    double lo = 0.0;
    double hi = 1.0;
    while (reliability_at(sample, hi) > target_reliability) {
        hi *= 2.0;
        if (hi > 1e6) throw Error("calibrate_sigma: target reliability unreachable");
    }
    for (int iter = 0; iter < 60; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (reliability_at(sample, mid) > target_reliability) lo = mid;
        else hi = mid;
    }
    const double r_lo = reliability_at(sample, lo);
    const double r_hi = reliability_at(sample, hi);
    const double sigma =
        std::abs(r_lo - target_reliability) <= std::abs(r_hi - target_reliability) ? lo : hi;
    if (std::abs(reliability_at(sample, sigma) - target_reliability) > kTolerance) {
        throw Error("calibrate_sigma: target reliability unreachable at this sample size");
    }
    return sigma;
}

}  // namespace risecure
