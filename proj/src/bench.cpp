#include "risecure/bench.hpp"

#include "risecure/error.hpp"

#include <algorithm>
#include <chrono>

namespace risecure {

HardwareReference hardware_reference(CodeVariant variant) noexcept {
    if (variant == CodeVariant::rs) return {253.13, 92.94, 253.13 / 92.94, -10.66};
    return {21.64, 13.24, 21.64 / 13.24, -1.16};
}

namespace {

using Clock = std::chrono::steady_clock;

struct Key {
    Challenge c0;
    HelperData helper;
};

// Keys, outer challenges and read noise depend on the sample position only,
// not on the batch size, so every row replays a prefix of the same workload.
std::vector<Key> enroll_keys(const SystemConfig& cfg, std::size_t count) {
    std::vector<Key> keys;
    keys.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Challenge c0 = cfg.puf.kind() == PufKind::sram
                           ? Challenge::from_u64(i % std::get<SramParams>(cfg.puf.params()).num_blocks)
                           : Challenge::from_u64(derive_key("bench-c0", {cfg.seed, i}));
        auto e = enroll(cfg.puf, c0, cfg.code, derive_key("bench-enroll", {cfg.seed, i}));
        keys.push_back({std::move(c0), std::move(e.helper)});
    }
    return keys;
}

OuterChallenge outer_for(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    Stream rng("bench-outer", {seed, a, b});
    Bits c(kOuterChallengeBits);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = rng.bit();
    return {std::move(c)};
}

// Runs one batch through `buffer`; returns elapsed microseconds.
double run_leg(const SystemConfig& cfg, const BenchOptions& opt, const std::vector<Key>& keys,
               const std::vector<OuterChallenge>& outers, std::size_t batch, std::uint64_t rep,
               LookasideBuffer& buffer, std::size_t& failures) {
    OutputRequest req;
    req.mode = opt.mode;
    req.hash = cfg.hash;
    const auto start = Clock::now();
    for (std::size_t i = 0; i < batch; ++i) {
        const Key& key = keys[opt.distinct_keys ? i : 0];
        req.c0 = key.c0;
        req.helper = key.helper;
        req.outer = outers[i];
        req.noise_seed = derive_key("bench-noise", {cfg.seed, rep, i});
        try {
            const std::uint32_t puf_id = opt.distinct_keys ? static_cast<std::uint32_t>(i) : 0U;
            auto out = sample_with_buffer(buffer, cfg.puf, puf_id, cfg.code, req);
            (void)out;
        } catch (const ReconstructFailure&) {
            ++failures;
        }
    }
    return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

BenchLeg summarize(std::vector<double> times, BufferCounters counters, std::size_t failures, std::size_t batch) {
    std::sort(times.begin(), times.end());
    BenchLeg leg;
    leg.best_us = times.front();
    leg.median_us = times[times.size() / 2];
    leg.crps_per_ms = leg.best_us > 0 ? static_cast<double>(batch) / (leg.best_us / 1000.0) : 0.0;
    leg.counters = counters;
    leg.failures = failures;
    return leg;
}

double time_single_samples(const SystemConfig& cfg, const Key& key, OutputMode mode, std::size_t n) {
    OutputRequest req;
    req.mode = mode;
    req.hash = cfg.hash;
    req.c0 = key.c0;
    req.helper = key.helper;
    std::vector<OuterChallenge> outers;
    for (std::size_t i = 0; i < n; ++i) outers.push_back(outer_for(cfg.seed, 0xFFFF, i));
    const auto start = Clock::now();
    for (std::size_t i = 0; i < n; ++i) {
        req.noise_seed = derive_key("throughput-noise", {cfg.seed, static_cast<std::uint64_t>(mode), i});
        req.outer = outers[i];
        try {
            (void)select_output(cfg.puf, cfg.code, req);
        } catch (const ReconstructFailure&) {
        }
    }
    const double us = std::chrono::duration<double, std::micro>(Clock::now() - start).count();
    return static_cast<double>(n) / (us / 1000.0);
}

}  // namespace

BenchReport run_batch_bench(const SystemConfig& cfg, const BenchOptions& opt) {
    cfg.validate();
    if (opt.batch_sizes.empty()) throw Error("bench: no batch sizes given");
    if (opt.repeats == 0) throw Error("bench: repeats must be positive");
    if (opt.mode == OutputMode::raw) throw Error("bench: raw mode does not use the ECC path");

    BenchReport report;
    report.code_id = cfg.code.id();
    report.puf_kind = std::string(to_string(cfg.puf.kind()));
    report.capacity = cfg.buffer_capacity;
    report.distinct_keys = opt.distinct_keys;
    report.reference = hardware_reference(cfg.code.variant());

    for (std::size_t batch : opt.batch_sizes) {
        if (batch == 0) throw Error("bench: batch sizes must be >= 1");
        const auto keys = enroll_keys(cfg, opt.distinct_keys ? batch : 1);
        std::vector<OuterChallenge> outers;
        for (std::size_t i = 0; i < batch; ++i) outers.push_back(outer_for(cfg.seed, 0, i));

        BenchRow row;
        row.batch = batch;
        std::vector<double> unbuf_t;
        std::vector<double> buf_t;
        BufferCounters unbuf_c;
        BufferCounters buf_c;
        std::size_t unbuf_fail = 0;
        std::size_t buf_fail = 0;
        for (std::size_t rep = 0; rep < opt.repeats; ++rep) {
            LookasideBuffer passthrough(0, opt.policy);
            std::size_t f0 = 0;
            unbuf_t.push_back(run_leg(cfg, opt, keys, outers, batch, rep, passthrough, f0));
            LookasideBuffer buffer(cfg.buffer_capacity, opt.policy);
            std::size_t f1 = 0;
            buf_t.push_back(run_leg(cfg, opt, keys, outers, batch, rep, buffer, f1));
            if (rep == 0) {
                unbuf_c = passthrough.counters();
                buf_c = buffer.counters();
                unbuf_fail = f0;
                buf_fail = f1;
            }
        }
        row.unbuffered = summarize(unbuf_t, unbuf_c, unbuf_fail, batch);
        row.buffered = summarize(buf_t, buf_c, buf_fail, batch);
        row.speedup = row.buffered.best_us > 0 ? row.unbuffered.best_us / row.buffered.best_us : 0.0;
        report.rows.push_back(row);
    }

    if (opt.throughput_samples > 0) {
        const auto keys = enroll_keys(cfg, 1);
        auto& t = report.throughput;
        t.corrected_crps_per_ms = time_single_samples(cfg, keys[0], OutputMode::corrected, opt.throughput_samples);
        t.hashed_crps_per_ms = time_single_samples(cfg, keys[0], OutputMode::hashed, opt.throughput_samples);
        t.change_pct = 100.0 * (t.hashed_crps_per_ms - t.corrected_crps_per_ms) / t.corrected_crps_per_ms;
    }
    return report;
}

}  // namespace risecure
