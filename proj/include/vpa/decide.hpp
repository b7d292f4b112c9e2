#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "vpa/automaton.hpp"

namespace vpa {

enum class Outcome { Holds, Fails, TimedOut };

struct DecisionStats {
  std::size_t d_states = 0;       // summary states built on the right side
  std::size_t p_transitions = 0;  // reachability entries (edges or facts)
  std::size_t iterations = 0;     // saturation rounds interleaved with discovery
};

struct Verdict {
  Outcome outcome = Outcome::Holds;
  std::optional<Word> witness;  // counterexample word, when asked for
  DecisionStats stats;
};

struct DecisionOptions {
  std::chrono::milliseconds timeout{0};  // zero: unlimited
  std::uint64_t max_steps = 0;           // zero: unlimited
  bool find_witness = true;
  std::size_t witness_max_len = 6;
};

// Universality and inclusion, each in two flavors. The on-the-fly procedures
// determinize the right side lazily, driven by which (state, top) pairs the
// interleaved reachability saturation proves to co-occur, and stop at the
// first rejecting product state. The standard procedures build the complete
// determinization first. A counterexample longer than witness_max_len leaves
// the witness unset even when the property fails.
Verdict universality_on_the_fly(const Vpa& m, const DecisionOptions& opts = {});
Verdict universality_standard(const Vpa& m, const DecisionOptions& opts = {});
Verdict inclusion_on_the_fly(const Vpa& a, const Vpa& b,
                             const DecisionOptions& opts = {});
Verdict inclusion_standard(const Vpa& a, const Vpa& b,
                           const DecisionOptions& opts = {});

// One-state complete acceptor of every word over the alphabet.
Vpa make_universal_acceptor(const PartitionedAlphabet& alphabet);

// Shortest word (by length, then by symbol order) accepted by a but not by
// b, among words of length at most max_len.
std::optional<Word> find_counterexample(const Vpa& a, const Vpa& b,
                                        std::size_t max_len);

}  // namespace vpa
