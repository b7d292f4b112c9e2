#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "vpa/alphabet.hpp"
#include "vpa/bits.hpp"

namespace vpa {

using State = std::uint32_t;
using StackSymbol = std::uint32_t;

/// Stack symbol id 0 is the bottom marker. It is never pushed and never
/// stored inside a Configuration's explicit stack.
inline constexpr StackSymbol kBottom = 0;

struct CallRule {
  State from;
  Symbol symbol;
  State to;
  StackSymbol push;  // never kBottom
  auto operator<=>(const CallRule&) const = default;
};

struct ReturnRule {
  State from;
  Symbol symbol;
  StackSymbol top;  // kBottom allowed: fires on the empty stack, keeps it
  State to;
  auto operator<=>(const ReturnRule&) const = default;
};

struct InternalRule {
  State from;
  Symbol symbol;
  State to;
  auto operator<=>(const InternalRule&) const = default;
};

/// Control state plus explicit stack, topmost first. The bottom marker is
/// implicit and never appears in the vector.
struct Configuration {
  State state = 0;
  std::vector<StackSymbol> stack;
  auto operator<=>(const Configuration&) const = default;
};

class VpaBuilder;

/// Visibly pushdown automaton. Immutable once built; rule lists are sorted
/// and deduplicated, with per-(symbol, state) index spans for stepping.
class Vpa {
 public:
  const PartitionedAlphabet& alphabet() const { return alphabet_; }

  std::uint32_t num_states() const {
    return static_cast<std::uint32_t>(state_names_.size());
  }
  const std::string& state_name(State q) const { return state_names_[q]; }
  std::optional<State> find_state(std::string_view name) const;

  const std::vector<State>& initials() const { return initials_; }
  const std::vector<State>& finals() const { return finals_; }
  const StateBits& final_bits() const { return final_bits_; }
  bool is_initial(State q) const;
  bool is_final(State q) const { return final_bits_.test(q); }

  /// Stack symbols including the bottom marker at id 0 (named "BOT").
  std::uint32_t num_stack_symbols() const {
    return static_cast<std::uint32_t>(stack_names_.size());
  }
  const std::string& stack_name(StackSymbol g) const { return stack_names_[g]; }
  std::optional<StackSymbol> find_stack_symbol(std::string_view name) const;

  std::span<const CallRule> call_rules() const { return call_rules_; }
  std::span<const ReturnRule> return_rules() const { return return_rules_; }
  std::span<const InternalRule> internal_rules() const {
    return internal_rules_;
  }

  /// All rules of one symbol (contiguous in the sorted rule lists).
  std::span<const CallRule> call_rules_of(Symbol a) const;
  std::span<const ReturnRule> return_rules_of(Symbol a) const;
  std::span<const InternalRule> internal_rules_of(Symbol a) const;

  /// Rules firing from state q on symbol a.
  std::span<const CallRule> calls_from(State q, Symbol a) const;
  std::span<const InternalRule> internals_from(State q, Symbol a) const;
  /// Return rules from q on a, sorted by top symbol.
  std::span<const ReturnRule> returns_from(State q, Symbol a) const;
  /// Return rules from q on a with the given top (kBottom for empty stack).
  std::span<const ReturnRule> returns_from(State q, Symbol a,
                                           StackSymbol top) const;

  bool operator==(const Vpa& o) const;

 private:
  friend class VpaBuilder;
  Vpa(PartitionedAlphabet alphabet) : alphabet_(std::move(alphabet)) {}
  void build_indexes();

  PartitionedAlphabet alphabet_;
  std::vector<std::string> state_names_;
  std::vector<std::string> stack_names_;  // [0] == "BOT"
  std::vector<State> initials_;           // sorted
  std::vector<State> finals_;             // sorted
  StateBits final_bits_;
  std::vector<CallRule> call_rules_;          // sorted by (symbol, from, ...)
  std::vector<ReturnRule> return_rules_;      // sorted by (symbol, from, top, to)
  std::vector<InternalRule> internal_rules_;  // sorted by (symbol, from, to)
  // Index spans: slot (class-relative symbol * num_states + state) -> [begin, end).
  std::vector<std::uint32_t> call_index_, return_index_, internal_index_;
};

/// Incremental constructor for Vpa values. Validates names, symbol classes,
/// and the no-pushed-bottom invariant as rules are added.
class VpaBuilder {
 public:
  explicit VpaBuilder(PartitionedAlphabet alphabet);

  State add_state(std::string name);
  StackSymbol add_stack_symbol(std::string name);
  void mark_initial(State q);
  void mark_final(State q);
  void add_call_rule(State from, Symbol a, State to, StackSymbol push);
  void add_return_rule(State from, Symbol a, StackSymbol top, State to);
  void add_internal_rule(State from, Symbol a, State to);

  std::uint32_t num_states() const { return vpa_.num_states(); }
  const PartitionedAlphabet& alphabet() const { return vpa_.alphabet(); }

  Vpa build();

 private:
  void check_state(State q, const char* role) const;
  void check_stack(StackSymbol g) const;
  void check_class(Symbol a, SymbolClass expected) const;

  Vpa vpa_;
  std::map<std::string, State, std::less<>> state_ids_;
  std::map<std::string, StackSymbol, std::less<>> stack_ids_;
  std::set<State> initial_set_, final_set_;
  bool built_ = false;
};

/// Successor configurations of c on symbol a, sorted and deduplicated.
/// Throws if a is not in the alphabet or c references unknown ids.
std::vector<Configuration> step(const Vpa& m, const Configuration& c,
                                Symbol a);

/// True iff some run over w from an initial configuration ends in a final
/// state (the remaining stack is irrelevant).
bool accepts(const Vpa& m, const Word& w);

/// Synchronous product. Accepts the intersection of the two languages.
/// Requires matching alphabets; stack symbols are pairs, bottoms collapse.
Vpa product(const Vpa& a, const Vpa& b);

/// Complement of a deterministic, complete automaton: flips final states.
/// Throws (naming the offending slot) if m is not deterministic + complete.
Vpa complement_deterministic(const Vpa& m);

/// All accepted words of length <= max_len, in length-free lexicographic
/// symbol-id order within the set.
std::set<Word> enumerate_language(const Vpa& m, std::size_t max_len);

/// Throws with the offending (state, symbol[, top]) slot if m has two rules
/// in one slot or more than one initial state.
void validate_deterministic(const Vpa& m);

/// Throws with the first empty (state, symbol[, top]) slot. Return slots
/// range over every stack symbol including the bottom marker.
void validate_complete(const Vpa& m);

}  // namespace vpa
