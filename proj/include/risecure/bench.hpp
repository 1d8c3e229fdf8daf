#pragma once

#include "risecure/system.hpp"

#include <vector>

namespace risecure {

struct BenchOptions {
    std::vector<std::size_t> batch_sizes{1, 2, 4, 8, 16};
    std::size_t repeats = 5;
    /// Each batch samples B distinct keys instead of one key B times.
    bool distinct_keys = false;
    OutputMode mode = OutputMode::hashed;
    ReplacementPolicy policy = ReplacementPolicy::fifo;
    /// Samples per leg of the single-sample corrected vs hashed throughput run.
    std::size_t throughput_samples = 200;
};

struct BenchLeg {
    double best_us = 0.0;    // fastest repeat
    double median_us = 0.0;
    double crps_per_ms = 0.0;  // from best_us
    BufferCounters counters;   // from the first repeat
    std::size_t failures = 0;
};

struct BenchRow {
    std::size_t batch = 0;
    BenchLeg unbuffered;
    BenchLeg buffered;
    double speedup = 0.0;  // unbuffered.best_us / buffered.best_us
};

struct ThroughputComparison {
    double corrected_crps_per_ms = 0.0;
    double hashed_crps_per_ms = 0.0;
    /// (hashed - corrected) / corrected, in percent.
    double change_pct = 0.0;
};

/// Hardware figures for the same experiment, reported next to the software
/// measurements for comparison only.
struct HardwareReference {
    double batch16_unbuffered_us = 0.0;
    double batch16_buffered_us = 0.0;
    double batch16_speedup = 0.0;
    double hashed_throughput_change_pct = 0.0;
};

HardwareReference hardware_reference(CodeVariant variant) noexcept;

struct BenchReport {
    std::string code_id;
    std::string puf_kind;
    std::size_t capacity = 0;
    bool distinct_keys = false;
    std::vector<BenchRow> rows;
    ThroughputComparison throughput;
    HardwareReference reference;
};

/// For each batch size B: enroll the key(s) untimed, then time B samples
/// through a pass-through (capacity 0) buffer and through a cold buffer of
/// the configured capacity. Counters are exact; times depend on the host.
BenchReport run_batch_bench(const SystemConfig& config, const BenchOptions& options);

}  // namespace risecure
