#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace risecure {

/// Fixed-length bit string, one bit per element. Index 0 is the first bit,
/// which is the most significant bit of the first byte when packed.
class Bits {
public:
    Bits() = default;
    explicit Bits(std::size_t n) : bits_(n, 0) {}
    explicit Bits(std::vector<std::uint8_t> bits);

    /// Bits of `value`, most significant first, truncated to the low `width` bits.
    static Bits from_u64(std::uint64_t value, std::size_t width);
    /// Unpacks `nbits` bits from MSB-first bytes. Throws when the byte count is
    /// wrong or the padding bits of the final byte are not zero.
    static Bits from_bytes(std::span<const std::uint8_t> bytes, std::size_t nbits);
    static Bits from_hex(std::string_view hex, std::size_t nbits);

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }

    std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
    std::uint8_t& operator[](std::size_t i) { return bits_[i]; }
    void flip(std::size_t i) { bits_[i] ^= 1; }

    /// Value of the first min(size, 64) bits read MSB first. Throws if size > 64.
    std::uint64_t to_u64() const;
    std::vector<std::uint8_t> to_bytes() const;
    std::string to_hex() const;

    Bits operator^(const Bits& other) const;
    Bits& operator^=(const Bits& other);
    Bits concat(const Bits& tail) const;
    Bits slice(std::size_t offset, std::size_t count) const;

    std::size_t popcount() const noexcept;
    std::span<const std::uint8_t> view() const noexcept { return bits_; }

    friend bool operator==(const Bits&, const Bits&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

std::size_t hamming_distance(const Bits& a, const Bits& b);

std::string to_hex(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> from_hex(std::string_view hex);

}  // namespace risecure
