#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace risecure {

struct SelftestResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SelftestOptions {
    /// Runs the ECC-dependent checks against a decoder that corrupts its output.
    bool inject_decode_fault = false;
    std::uint64_t seed = 0;
};

/// Fast invariant suite: ECC capability bound, fuzzy-extractor identity,
/// hash known answers, FIFO eviction, custom-opcode decode vectors and the
/// parity transform.
std::vector<SelftestResult> run_selftest(const SelftestOptions& options);

}  // namespace risecure
