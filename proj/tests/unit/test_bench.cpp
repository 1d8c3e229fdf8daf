#include "doctest.h"

#include "risecure/bench.hpp"
#include "risecure/error.hpp"
#include "risecure/serialize.hpp"

using namespace risecure;

TEST_CASE("batch counters are exact for the repeated-key workload") {
    SystemConfig cfg;
    BenchOptions opt;
    opt.batch_sizes = {1, 4, 16};
    opt.repeats = 2;
    opt.throughput_samples = 10;
    const auto rep = run_batch_bench(cfg, opt);
    REQUIRE(rep.rows.size() == 3);
    for (const auto& row : rep.rows) {
        CHECK(row.unbuffered.counters.decode_calls == row.batch);
        CHECK(row.unbuffered.counters.misses == row.batch);
        CHECK(row.unbuffered.counters.hits == 0);
        CHECK(row.buffered.counters.decode_calls == 1);
        CHECK(row.buffered.counters.hits == row.batch - 1);
        CHECK(row.buffered.counters.lookups() == row.batch);
        CHECK(row.buffered.counters.decode_calls <= row.unbuffered.counters.decode_calls);
        CHECK(row.speedup == doctest::Approx(row.unbuffered.best_us / row.buffered.best_us));
        CHECK(row.buffered.best_us <= row.buffered.median_us);
    }
    CHECK(rep.reference.batch16_unbuffered_us == 21.64);
    CHECK(rep.reference.batch16_buffered_us == 13.24);
    CHECK(rep.throughput.hashed_crps_per_ms > 0);
}

TEST_CASE("distinct keys decode once per key") {
    SystemConfig cfg;
    BenchOptions opt;
    opt.batch_sizes = {8};
    opt.repeats = 1;
    opt.distinct_keys = true;
    opt.throughput_samples = 0;
    const auto row = run_batch_bench(cfg, opt).rows.at(0);
    CHECK(row.buffered.counters.decode_calls == 8);
    CHECK(row.buffered.counters.hits == 0);
    CHECK(row.unbuffered.counters.decode_calls == 8);
}

TEST_CASE("RS hardware reference figures") {
    const auto ref = hardware_reference(CodeVariant::rs);
    CHECK(ref.batch16_unbuffered_us == 253.13);
    CHECK(ref.batch16_buffered_us == 92.94);
    CHECK(ref.batch16_speedup == doctest::Approx(2.72).epsilon(0.005));
    CHECK(ref.hashed_throughput_change_pct == -10.66);
    CHECK(hardware_reference(CodeVariant::bch).batch16_speedup == doctest::Approx(1.63).epsilon(0.005));
}

TEST_CASE("bench report JSON is schema-versioned and counter-consistent") {
    SystemConfig cfg;
    BenchOptions opt;
    opt.batch_sizes = {2};
    opt.repeats = 1;
    opt.throughput_samples = 5;
    const Json j = to_json(run_batch_bench(cfg, opt));
    CHECK(j.at("schema_version") == kSchemaVersion);
    const auto& row = j.at("rows").at(0);
    const auto& c = row.at("buffered").at("counters");
    CHECK(c.at("hits").get<int>() + c.at("misses").get<int>() == 2);
    CHECK(Json::parse(j.dump()) == j);
}

TEST_CASE("bench preconditions") {
    SystemConfig cfg;
    BenchOptions opt;
    opt.batch_sizes = {0};
    CHECK_THROWS_AS(run_batch_bench(cfg, opt), Error);
    opt.batch_sizes = {};
    CHECK_THROWS_AS(run_batch_bench(cfg, opt), Error);
    opt.batch_sizes = {1};
    opt.mode = OutputMode::raw;
    CHECK_THROWS_AS(run_batch_bench(cfg, opt), Error);
}
