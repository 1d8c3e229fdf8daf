#include "risecure/lookaside_buffer.hpp"

#include "risecure/error.hpp"

#include <algorithm>

namespace risecure {

const BufferEntry* LookasideBuffer::lookup(const BufferKey& key) {
    auto it = std::find_if(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == key; });
    if (it == entries_.end()) {
        ++counters_.misses;
        return nullptr;
    }
    ++counters_.hits;
    if (policy_ == ReplacementPolicy::lru) {
        auto moved = std::move(*it);
        entries_.erase(it);
        entries_.push_back(std::move(moved));
        return &entries_.back().second;
    }
    return &it->second;
}

void LookasideBuffer::insert(const BufferKey& key, BufferEntry entry) {
    if (capacity_ == 0) return;
    auto it = std::find_if(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == key; });
    if (it != entries_.end()) {
        it->second = std::move(entry);
        return;
    }
    if (entries_.size() == capacity_) {
        entries_.pop_front();
        ++counters_.evictions;
    }
    entries_.emplace_back(key, std::move(entry));
}

void LookasideBuffer::erase(const BufferKey& key) {
    std::erase_if(entries_, [&](const auto& e) { return e.first == key; });
}

std::vector<BufferKey> LookasideBuffer::keys() const {
    std::vector<BufferKey> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.first);
    return out;
}

bool LookasideBuffer::contains(const BufferKey& key) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == key; });
}

ModeOutput sample_with_buffer(LookasideBuffer& buffer, const PufInstance& puf, std::uint32_t puf_id,
                              const CodeSpec& code, const OutputRequest& req) {
    if (req.mode == OutputMode::raw) return puf.eval_raw(req.c0, req.noise_seed);
    if (req.mode == OutputMode::hashed && !req.outer) throw Error("output mode hashed requires an outer challenge");

    const BufferKey key{puf_id, req.c0};
    if (const BufferEntry* hit = buffer.lookup(key)) {
        if (req.mode == OutputMode::corrected) return hit->r2;
        return compose_response(hit->r2, *req.outer, code.n_bits(), req.hash);
    }
    if (!req.helper) throw Error("lookaside miss with no helper data for this key");
    buffer.record_decode();
    auto recovered = reconstruct(puf, req.c0, *req.helper, code, req.noise_seed);
    if (!recovered) throw ReconstructFailure();
    buffer.insert(key, BufferEntry{*recovered, *req.helper});
    if (req.mode == OutputMode::corrected) return *std::move(recovered);
    return compose_response(*recovered, *req.outer, code.n_bits(), req.hash);
}

}  // namespace risecure
