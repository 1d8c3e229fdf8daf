#include "risecure/device.hpp"

#include "risecure/error.hpp"

namespace risecure {

PufDevice::PufDevice(CodeSpec code, std::size_t buffer_capacity, std::uint64_t seed, HashAlgorithm hash)
    : code_(std::move(code)), buffer_(buffer_capacity), seed_(seed), hash_(hash) {}

void PufDevice::attach(std::uint32_t idx, PufInstance puf) {
    pufs_.insert_or_assign(idx, std::move(puf));
    aux_table_.erase(idx);
}

const PufInstance* PufDevice::puf(std::uint32_t idx) const {
    auto it = pufs_.find(idx);
    return it == pufs_.end() ? nullptr : &it->second;
}

const AuxRecord* PufDevice::aux(std::uint32_t idx) const {
    auto it = aux_table_.find(idx);
    return it == aux_table_.end() ? nullptr : &it->second;
}

std::uint64_t PufDevice::init_seed(std::uint32_t idx, std::uint64_t seq) const noexcept {
    return derive_key("device-init", {seed_, idx, seq});
}

std::uint64_t PufDevice::chal_noise_seed(std::uint64_t seq) const noexcept {
    return derive_key("device-chal", {seed_, seq});
}

PufStatus PufDevice::inner_puf_init(std::uint32_t idx, const Challenge& c0) {
    const PufInstance* p = puf(idx);
    if (!p) return PufStatus::unknown_index;
    if (p->response_bits() != code_.n_bits()) return PufStatus::width_mismatch;
    if (p->kind() == PufKind::sram && c0.bits.to_u64() >= std::get<SramParams>(p->params()).num_blocks) {
        return PufStatus::invalid_challenge;
    }
    Enrollment e = enroll(*p, c0, code_, init_seed(idx, init_count_++));

    // A re-init of the same idx with a different C0 leaves a stale buffer line.
    if (const AuxRecord* old = aux(idx); old && !(old->c0 == c0)) buffer_.erase(BufferKey{idx, old->c0});
    aux_table_.insert_or_assign(idx, AuxRecord{c0, e.helper});
    buffer_.insert(BufferKey{idx, c0}, BufferEntry{std::move(e.response), std::move(e.helper)});
    return PufStatus::ok;
}

std::pair<PufStatus, std::optional<FinalResponse>> PufDevice::outer_puf_chal(std::uint32_t idx,
                                                                             const OuterChallenge& c) {
    const AuxRecord* rec = aux(idx);
    const PufInstance* p = puf(idx);
    if (!rec || !p) return {PufStatus::unknown_index, std::nullopt};
    if (c.bits.size() != kOuterChallengeBits) return {PufStatus::width_mismatch, std::nullopt};

    OutputRequest req;
    req.mode = OutputMode::hashed;
    req.c0 = rec->c0;
    req.noise_seed = chal_noise_seed(chal_count_++);
    req.helper = rec->helper;
    req.outer = c;
    req.hash = hash_;
    try {
        auto out = sample_with_buffer(buffer_, *p, idx, code_, req);
        return {PufStatus::ok, std::get<FinalResponse>(out)};
    } catch (const ReconstructFailure&) {
        return {PufStatus::reconstruct_failure, std::nullopt};
    }
}

}  // namespace risecure
