#pragma once

#include "risecure/hash_extension.hpp"

#include <cstdint>
#include <deque>
#include <utility>
#include <vector>

namespace risecure {

struct BufferKey {
    std::uint32_t puf_id = 0;
    Challenge c0;
    friend bool operator==(const BufferKey&, const BufferKey&) = default;
};

struct BufferEntry {
    StableResponse r2;
    HelperData aux;
    friend bool operator==(const BufferEntry&, const BufferEntry&) = default;
};

struct BufferCounters {
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
    std::uint64_t decode_calls = 0;
    std::uint64_t evictions = 0;

    std::uint64_t lookups() const noexcept { return hits + misses; }
    friend bool operator==(const BufferCounters&, const BufferCounters&) = default;
};

enum class ReplacementPolicy { fifo, lru };

/// Bounded cache of error-corrected responses keyed by (PUF index, C0).
/// The default policy is strict FIFO: hits never reorder entries. LRU exists
/// only for benchmark comparison. Capacity 0 disables storage entirely, which
/// turns the buffer into a counting pass-through.
class LookasideBuffer {
public:
    explicit LookasideBuffer(std::size_t capacity = 16, ReplacementPolicy policy = ReplacementPolicy::fifo)
        : capacity_(capacity), policy_(policy) {}

    /// Pointer to the cached entry, valid until the next insert; nullptr on miss.
    const BufferEntry* lookup(const BufferKey& key);
    /// Replaces in place when the key is present, otherwise appends and
    /// evicts the oldest entry when full.
    void insert(const BufferKey& key, BufferEntry entry);
    /// Drops an entry without touching counters.
    void erase(const BufferKey& key);

    void record_decode() noexcept { ++counters_.decode_calls; }

    std::size_t size() const noexcept { return entries_.size(); }
    std::size_t capacity() const noexcept { return capacity_; }
    ReplacementPolicy policy() const noexcept { return policy_; }
    const BufferCounters& counters() const noexcept { return counters_; }
    /// Keys in eviction order, oldest first.
    std::vector<BufferKey> keys() const;
    bool contains(const BufferKey& key) const;

private:
    std::size_t capacity_;
    ReplacementPolicy policy_;
    std::deque<std::pair<BufferKey, BufferEntry>> entries_;
    BufferCounters counters_;
};

/// Buffer-first sampling. Raw mode bypasses the buffer. A hit reuses the
/// cached R2 with no PUF read and no decode; a miss reconstructs with the
/// request's helper data, counts one decode and caches the result. Failures
/// throw ReconstructFailure and are never cached.
ModeOutput sample_with_buffer(LookasideBuffer& buffer, const PufInstance& puf, std::uint32_t puf_id,
                              const CodeSpec& code, const OutputRequest& request);

}  // namespace risecure
