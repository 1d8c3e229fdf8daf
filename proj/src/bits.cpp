#include "risecure/bits.hpp"

#include "risecure/error.hpp"

#include <algorithm>
#include <numeric>

namespace risecure {

Bits::Bits(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto& b : bits_) b = b ? 1 : 0;
}

Bits Bits::from_u64(std::uint64_t value, std::size_t width) {
    if (width > 64) throw Error("Bits::from_u64: width exceeds 64");
    Bits out(width);
    for (std::size_t i = 0; i < width; ++i) {
        out.bits_[i] = static_cast<std::uint8_t>((value >> (width - 1 - i)) & 1U);
    }
    return out;
}

Bits Bits::from_bytes(std::span<const std::uint8_t> bytes, std::size_t nbits) {
    if (bytes.size() != (nbits + 7) / 8) {
        throw Error("bit string: expected " + std::to_string((nbits + 7) / 8) + " bytes, got " +
                    std::to_string(bytes.size()));
    }
    Bits out(nbits);
    for (std::size_t i = 0; i < nbits; ++i) {
        out.bits_[i] = static_cast<std::uint8_t>((bytes[i / 8] >> (7 - i % 8)) & 1U);
    }
    if (nbits % 8 != 0) {
        const std::uint8_t pad_mask = static_cast<std::uint8_t>(0xFFU >> (nbits % 8));
        if ((bytes.back() & pad_mask) != 0) throw Error("bit string: nonzero padding bits");
    }
    return out;
}

Bits Bits::from_hex(std::string_view hex, std::size_t nbits) {
    const auto bytes = risecure::from_hex(hex);
    return from_bytes(bytes, nbits);
}

std::uint64_t Bits::to_u64() const {
    if (bits_.size() > 64) throw Error("Bits::to_u64: more than 64 bits");
    std::uint64_t v = 0;
    for (auto b : bits_) v = (v << 1) | b;
    return v;
}

std::vector<std::uint8_t> Bits::to_bytes() const {
    std::vector<std::uint8_t> out((bits_.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        out[i / 8] |= static_cast<std::uint8_t>(bits_[i] << (7 - i % 8));
    }
    return out;
}

std::string Bits::to_hex() const { return risecure::to_hex(to_bytes()); }

Bits Bits::operator^(const Bits& other) const {
    Bits out = *this;
    out ^= other;
    return out;
}

Bits& Bits::operator^=(const Bits& other) {
    if (other.size() != size()) throw Error("Bits xor: length mismatch");
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] ^= other.bits_[i];
    return *this;
}

Bits Bits::concat(const Bits& tail) const {
    Bits out = *this;
    out.bits_.insert(out.bits_.end(), tail.bits_.begin(), tail.bits_.end());
    return out;
}

Bits Bits::slice(std::size_t offset, std::size_t count) const {
    if (offset + count > size()) throw Error("Bits::slice: out of range");
    Bits out(count);
    std::copy_n(bits_.begin() + static_cast<std::ptrdiff_t>(offset), count, out.bits_.begin());
    return out;
}

std::size_t Bits::popcount() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::size_t hamming_distance(const Bits& a, const Bits& b) {
    if (a.size() != b.size()) throw Error("hamming_distance: length mismatch");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
    return d;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s;
    s.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xF]);
    }
    return s;
}

namespace {
int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}
}  // namespace

std::vector<std::uint8_t> from_hex(std::string_view hex) {
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    if (hex.size() % 2 != 0) throw Error("hex string has odd length");
    std::vector<std::uint8_t> out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int hi = hex_value(hex[2 * i]);
        const int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw Error("invalid hex digit");
        out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return out;
}

}  // namespace risecure
