#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "vpa/automaton.hpp"
#include "vpa/bits.hpp"
#include "vpa/budget.hpp"

namespace vpa {

enum class DetMode {
  Optimized,     // summary relation only; at most 2^(n^2) states
  Intermediate,  // summary plus reachable set, seeded from the initial states
  Original,      // summary seeded with the full identity; at most 2^(n^2 + n)
};

enum class PopScope {
  // Interleaves determinization with reachability saturation and emits
  // return transitions only for (state, top) pairs that actually co-occur.
  ReachableFacts,
  // Emits return transitions for every generated stack symbol. The result
  // has a complete transition function.
  AllGenerated,
};

struct DeterminizeOptions {
  DetMode mode = DetMode::Optimized;
  PopScope pop_scope = PopScope::ReachableFacts;
};

// State of the determinized automaton. summary relates the states the
// current same-depth segment started from to the states reachable now;
// reach tracks the currently reachable set (empty and unused in Optimized
// mode, where it equals the summary's range).
struct DState {
  BitRelation summary;
  StateBits reach;

  bool operator==(const DState&) const = default;
  std::uint64_t hash() const;
};

// Transition relations of one automaton, ready for composition.
class RelationIndex {
 public:
  explicit RelationIndex(const Vpa& m);

  std::uint32_t num_states() const { return n_; }
  std::uint32_t num_stack_symbols() const { return num_stack_; }

  const BitRelation& internal_rel(Symbol a) const;
  const BitRelation& call_rel(Symbol a, StackSymbol push) const;
  const BitRelation& call_any(Symbol a) const;  // union over pushed symbols
  const BitRelation& return_rel(Symbol a, StackSymbol top) const;

 private:
  std::uint32_t n_;
  std::uint32_t num_stack_;
  std::uint32_t call_base_, return_base_, internal_base_;
  std::vector<BitRelation> call_rels_;   // [call * num_stack + push]
  std::vector<BitRelation> call_any_;    // [call]
  std::vector<BitRelation> return_rels_;  // [return * num_stack + top]
  std::vector<BitRelation> internal_rels_;
};

DState initial_dstate(const Vpa& m, DetMode mode);
DState internal_successor(const DState& d, const RelationIndex& rels,
                          Symbol a, DetMode mode);
DState bottom_return_successor(const DState& d, const RelationIndex& rels,
                               Symbol a, DetMode mode);
// The state entered after reading call a (the frame pushed alongside is the
// pre-call state itself).
DState call_successor(const DState& d, const RelationIndex& rels, Symbol a,
                      DetMode mode);
// The state after reading return a while popping a frame that was pushed by
// frame_call from frame.
DState pop_successor(const DState& frame, Symbol frame_call,
                     const DState& current, const RelationIndex& rels,
                     Symbol ret, DetMode mode);
bool is_final_dstate(const DState& d, const StateBits& finals, DetMode mode);

std::string dstate_name(const DState& d, const Vpa& m, DetMode mode);

struct DeterminizeStats {
  std::size_t num_dstates = 0;
  std::size_t num_stack_symbols = 0;  // bottom not counted
  std::size_t num_transitions = 0;
  std::size_t saturation_facts = 0;   // ReachableFacts scope only
};

struct DeterminizedVpa {
  Vpa automaton;
  std::vector<DState> dstates;  // indexed by state id of automaton
  // Stack symbol g >= 1 was pushed by call stack_origins[g - 1].second from
  // d-state stack_origins[g - 1].first.
  std::vector<std::pair<State, Symbol>> stack_origins;
  DeterminizeStats stats;
};

DeterminizedVpa determinize(const Vpa& m, const DeterminizeOptions& opts,
                            Budget& budget);
DeterminizedVpa determinize(const Vpa& m, const DeterminizeOptions& opts = {});

}  // namespace vpa
