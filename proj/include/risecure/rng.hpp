#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace risecure {

/// SplitMix64 output function. Used as the stream mixer and as the public
/// challenge-expansion mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Derives a stream key from a purpose tag and a list of integers. Distinct
/// tags give unrelated streams for the same numeric inputs.
std::uint64_t derive_key(std::string_view tag, std::initializer_list<std::uint64_t> parts) noexcept;

/// Counter-based generator: block i of the stream is mix64(key + i * golden).
/// Any position is addressable, and the stream is identical on every platform
/// for integer output. Normal variates use Box-Muller on top of `uniform()`.
class Stream {
public:
    explicit Stream(std::uint64_t key) noexcept : key_(key) {}
    Stream(std::string_view tag, std::initializer_list<std::uint64_t> parts) noexcept
        : key_(derive_key(tag, parts)) {}

    std::uint64_t next() noexcept;
    /// Uniform in [0, 1) with 53 bits of precision.
    double uniform() noexcept;
    /// Uniform integer in [0, bound). bound must be nonzero.
    std::uint64_t below(std::uint64_t bound) noexcept;
    double normal() noexcept;
    bool bit() noexcept { return (next() >> 63) != 0; }

    std::uint64_t key() const noexcept { return key_; }
    std::uint64_t position() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace risecure
