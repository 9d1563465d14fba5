// Copyright 2026 The forecal Authors
// SPDX-License-Identifier: Apache-2.0

// Counter-based random streams. The k-th value of stream `key` is the k-th
// output of a SplitMix64 generator seeded with `key`, computed directly:
//
//   value(key, k) = mix64(key + k * 0x9e3779b97f4a7c15)     (k >= 1)
//
// so any draw is a pure function of (key, k) and can be taken in any order.
// Independent sub-streams are split off with derive_key(parent, index).

#pragma once

#include <cstdint>

namespace forecal::rng {

inline constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ull;

/// SplitMix64 output finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t stream_value(std::uint64_t key, std::uint64_t k) noexcept {
    return mix64(key + k * golden_gamma);
}

/// k-th uniform variate in [0,1) with 53 random bits.
constexpr double stream_uniform(std::uint64_t key, std::uint64_t k) noexcept {
    return static_cast<double>(stream_value(key, k) >> 11) * 0x1.0p-53;
}

/// Key of sub-stream `index` of `parent`, e.g. Monte Carlo run j of a master seed.
constexpr std::uint64_t derive_key(std::uint64_t parent, std::uint64_t index) noexcept {
    return mix64(mix64(parent ^ 0x6a09e667f3bcc909ull) + (index + 1) * golden_gamma);
}

}  // namespace forecal::rng
