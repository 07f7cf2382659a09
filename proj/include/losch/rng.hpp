#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>

namespace losch {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// Independent stream for a tuple of ids (e.g. circuit, time index,
// trajectory). The seed is folded with each id in turn through splitmix64.
Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> ids);

// Stream ids for the phase pipeline.
enum StreamTag : std::uint64_t {
  kTagTrajectory = 0x11,
  kTagShots = 0x22,
  kTagHadamard = 0x33,
  kTagInterferometry = 0x44,
};

// Runs fn(i) for i in [0, n) on up to `threads` workers. Work items are
// claimed dynamically; callers write results into preallocated slots so
// output never depends on scheduling.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace losch
