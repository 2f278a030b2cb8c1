// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace ltdr {

using Rng = std::mt19937_64;

/// Stage tags keep the replicate streams of different procedures apart even
/// when they share a master seed.
enum class Stream : std::uint64_t {
    Path = 1,
    Noise = 2,
    BiasCorrection = 3,
    Confidence = 4,
    Statistics = 5,
    DiscountMc = 6,
    Stationary = 7,
};

/// Independent engine for (seed, stage, index). Depends only on its
/// arguments, never on scheduling.
Rng make_rng(std::uint64_t seed, Stream stage, std::uint64_t index);

/// Derive a child seed for nested procedures.
std::uint64_t derive_seed(std::uint64_t seed, Stream stage, std::uint64_t index);

/// Runs body(i) for i in [0, n) on `threads` workers (0 = hardware
/// concurrency). Work is split into contiguous static chunks; callers write
/// results to slot i so output is independent of the thread count. The first
/// exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace ltdr
