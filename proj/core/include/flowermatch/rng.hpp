#pragma once

// Splittable seeding: every (seed, domain, index) triple names an
// independent generator, so a trial's draws do not depend on which thread
// runs it or in what order.

#include <cstdint>
#include <random>

namespace flowermatch::rng {

/// Stream families. Keeping them distinct means e.g. the cluster of sample i
/// and the perturbation of trial i never share a generator.
enum class Domain : std::uint64_t {
  InitialCluster = 1,
  Perturbation = 2,
  FlowerCount = 3,
  Corruption = 4,
  Calibration = 5,
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

std::uint64_t stream_seed(std::uint64_t seed, Domain domain, std::uint64_t index);

using Engine = std::mt19937_64;

inline Engine make_stream(std::uint64_t seed, Domain domain, std::uint64_t index = 0) {
  return Engine(stream_seed(seed, domain, index));
}

}  // namespace flowermatch::rng
