#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace risecure {

using Digest = std::array<std::uint8_t, 32>;

enum class HashAlgorithm { sha3_256, sha2_256 };

std::string_view to_string(HashAlgorithm alg) noexcept;
HashAlgorithm parse_hash_algorithm(std::string_view name);

/// Keccak-f[1600] permutation on 25 little-endian lanes.
void keccak_f1600(std::array<std::uint64_t, 25>& state) noexcept;

/// FIPS 202 SHA3-256.
Digest sha3_256(std::span<const std::uint8_t> data) noexcept;
/// FIPS 180-4 SHA-256.
Digest sha2_256(std::span<const std::uint8_t> data) noexcept;

Digest hash(HashAlgorithm alg, std::span<const std::uint8_t> data) noexcept;

}  // namespace risecure
