#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "vpa/automaton.hpp"

namespace vpa {

// SplitMix64 sequence generator.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  // Uniform draw from [0, bound), unbiased via rejection sampling.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

// Derives an independent stream from a seed and a tag path. Streams with
// different tag paths are decorrelated, so each part of a generated model
// depends only on the seed and its own tags.
SplitMix64 derive_stream(std::uint64_t seed,
                         std::initializer_list<std::uint64_t> tags);

// k distinct indices from [0, n), ascending. Floyd's algorithm: k hash set
// operations regardless of n.
std::vector<std::uint64_t> sample_indices(SplitMix64& rng, std::uint64_t n,
                                          std::uint64_t k);

// Both generators share one shape: states q0..q{n-1}, call symbols {a, b},
// return symbols {c, d}, internal symbols {e, f}, stack symbols {g1, g2, g3},
// one uniformly drawn initial state.
//
// generate_random1 samples, per symbol, 2n transitions without replacement
// from that symbol's full tuple space (calls: from x to x push; returns:
// from x top-including-bottom x to; internals: from x to). Every state is
// final. 12n transitions total.
Vpa generate_random1(std::uint32_t num_states, std::uint64_t seed);

// generate_random2 samples per state and symbol: 2 call targets (to x push),
// 6 return pairs (top-including-bottom x to), 2 internal targets. Final
// states are ceil(final_fraction * n) distinct states. 20n transitions total.
Vpa generate_random2(std::uint32_t num_states, double final_fraction,
                     std::uint64_t seed);

}  // namespace vpa
