#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "vpa/automaton.hpp"
#include "vpa/budget.hpp"

namespace vpa {

// Edge label marking a silent transition inside a reachability automaton.
inline constexpr StackSymbol kEpsilonLabel = 0xFFFFFFFFu;

struct PTransition {
  std::uint32_t from;
  StackSymbol label;
  std::uint32_t to;
  friend auto operator<=>(const PTransition&, const PTransition&) = default;
};

// Snapshot of a saturated reachability automaton. From a pushdown state
// (ids [0, num_initials)) it accepts exactly the reachable stack contents,
// read topmost first and terminated by the bottom marker.
struct PAutomaton {
  std::uint32_t num_states = 0;
  std::uint32_t num_initials = 0;
  std::vector<PTransition> transitions;  // sorted; epsilon edges included
  std::vector<std::uint32_t> finals;     // sorted
  std::vector<std::string> state_names;
};

enum class FactScope {
  Recognized,  // only edges on some accepting path count
  AllSources,  // every materialized out edge counts
};

// (state, top of stack) pair known reachable. top == kBottom means the
// stack is empty.
struct TopFact {
  std::uint32_t source;
  StackSymbol top;
  friend auto operator<=>(const TopFact&, const TopFact&) = default;
};

// Forward-reachability saturation over a pushdown system's configuration
// automaton. States and rules may be added between run() calls; saturation
// resumes where it stopped, so callers can interleave discovery with
// saturation. Edges added by rules never target a rule-bearing state, which
// keeps the accepted stack languages well formed.
class Saturator {
 public:
  std::uint32_t add_state(std::string name);
  void mark_final(std::uint32_t s);

  // Seeds an edge. label must not be kEpsilonLabel.
  void add_edge(std::uint32_t from, StackSymbol label, std::uint32_t to);

  // Stack effects of the pushdown rules. Push and internal rules apply under
  // any top; pop rules name the popped symbol (never the bottom marker);
  // bottom rules change state while reading a bare bottom marker.
  void add_internal_rule(std::uint32_t p, std::uint32_t q);
  void add_push_rule(std::uint32_t p, std::uint32_t q, StackSymbol push);
  void add_pop_rule(std::uint32_t p, StackSymbol top, std::uint32_t q);
  void add_bottom_rule(std::uint32_t p, std::uint32_t q);

  // Processes the worklist to fixpoint. Throws BudgetExceeded with the
  // pending edge left queued, so a later run() resumes cleanly.
  void run(Budget& budget);

  bool settled() const { return work_.empty(); }
  std::uint32_t num_states() const;
  std::size_t num_edges() const { return num_edges_; }

  std::vector<TopFact> top_facts(FactScope scope) const;

  PAutomaton snapshot(std::uint32_t num_initials) const;

 private:
  struct EdgeKey {
    std::uint32_t from;
    StackSymbol label;
    std::uint32_t to;
    bool operator==(const EdgeKey&) const = default;
  };
  struct EdgeKeyHash {
    std::size_t operator()(const EdgeKey& e) const;
  };

  void insert_edge(std::uint32_t from, StackSymbol label, std::uint32_t to);
  void process(const PTransition& e);

  std::vector<std::string> names_;
  std::vector<std::uint8_t> final_;
  std::unordered_set<EdgeKey, EdgeKeyHash> edge_set_;
  std::size_t num_edges_ = 0;
  std::vector<std::vector<std::pair<StackSymbol, std::uint32_t>>> out_;
  std::vector<std::vector<std::uint32_t>> eps_in_;
  std::deque<PTransition> work_;

  std::vector<std::vector<std::uint32_t>> internal_rules_;
  std::vector<std::vector<std::pair<std::uint32_t, StackSymbol>>> push_rules_;
  std::vector<std::vector<std::uint32_t>> bottom_rules_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> pop_rules_;
  std::unordered_map<std::uint64_t, std::uint32_t> push_mids_;
};

// Reachable (control, top of stack) saturation for pushdowns whose stack
// symbols each have a unique pushing control. Under that stamping the symbols
// that can sit directly below g are exactly the tops of g's pusher, so the
// recognized facts close under four rules: seeds, tops copied along
// same-height edges, the pushed symbol after a call edge, and the pusher's
// tops after a pop edge. Rows are bitsets over symbols and every propagation
// is a word-parallel union, which keeps interleaved determinization cheap
// where edge-level saturation would materialize whole epsilon closures.
//
// Callers must only add edges whose source control already occurs in some
// reachable configuration; interleaved discovery guarantees this because
// controls are created as successors of processed ones.
class PairSaturator {
 public:
  // Controls and symbols are dense ids in creation order; symbols start at 1
  // (kBottom marks the empty stack).
  std::uint32_t add_control();
  StackSymbol add_symbol(std::uint32_t pusher);

  // Control q occurs with the empty stack.
  void seed_empty(std::uint32_t q);
  // Same-height edge u -> v: every top of u is a top of v.
  void add_internal_edge(std::uint32_t u, std::uint32_t v);
  // Call edge u -> v pushing g: v occurs with top g.
  void add_call_edge(std::uint32_t u, std::uint32_t v, StackSymbol g);
  // Return edge popping g into v: everything below g is a top of v.
  void add_pop_edge(StackSymbol g, std::uint32_t v);
  // Return edge u -> v reading the bare bottom marker; (u, kBottom) must
  // already be a fact.
  void add_bottom_edge(std::uint32_t u, std::uint32_t v);

  // Propagates rows to fixpoint. One budget step per row union; resumable
  // after BudgetExceeded.
  void run(Budget& budget);
  bool settled() const { return dirty_.empty(); }

  // Facts discovered since the previous call, each reported exactly once.
  std::vector<TopFact> take_new_facts();

  std::size_t num_pairs() const { return num_pairs_; }

 private:
  void set_pair(std::uint32_t q, StackSymbol g);
  void union_into(std::uint32_t v, const std::vector<std::uint64_t>& src);
  void mark_dirty(std::uint32_t u);

  std::vector<std::vector<std::uint64_t>> rows_;    // control -> symbol bits
  std::vector<std::vector<std::uint64_t>> deltas_;  // bits not yet propagated
  std::vector<std::vector<std::uint32_t>> flows_;   // control -> copy targets
  std::vector<std::uint32_t> pushers_;              // symbol - 1 -> control
  std::vector<std::uint8_t> queued_;
  std::deque<std::uint32_t> dirty_;
  std::unordered_set<std::uint64_t> flow_seen_;
  std::vector<TopFact> fresh_facts_;
  std::size_t num_pairs_ = 0;
};

// Saturates the reachability automaton of m's reachable configurations:
// control states first (ids equal m's state ids), then the accept state,
// then one middle state per distinct (target, pushed symbol) pair.
PAutomaton saturate(const Vpa& m, Budget& budget);

// Whether the snapshot accepts c's stack (plus the implicit bottom marker)
// from c.state. Independent of saturation internals: walks epsilon closures
// step by step.
bool recognizes(const PAutomaton& pa, const Configuration& c);

// All accepted configurations with stack height <= max_height.
std::set<Configuration> recognized_configurations(const PAutomaton& pa,
                                                  std::size_t max_height);

// Facts for sources in [0, num_initials).
std::vector<TopFact> top_facts(const PAutomaton& pa, FactScope scope);

// Emptiness of L(m) by saturation: empty iff no final state has a
// recognized fact.
bool is_language_empty(const Vpa& m, Budget& budget);

void dump_edges(const PAutomaton& pa, std::ostream& out);

}  // namespace vpa
