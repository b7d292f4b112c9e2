#include "vpa/preach.hpp"

#include <algorithm>
#include <bit>
#include <ostream>
#include <sstream>

#include "vpa/bits.hpp"
#include "vpa/error.hpp"

namespace vpa {

namespace {

std::uint64_t pack(std::uint32_t a, std::uint32_t b) {
  return (std::uint64_t{a} << 32) | b;
}

template <typename T>
bool push_unique(std::vector<T>& v, const T& x) {
  if (std::find(v.begin(), v.end(), x) != v.end()) return false;
  v.push_back(x);
  return true;
}

}  // namespace

std::size_t Saturator::EdgeKeyHash::operator()(const EdgeKey& e) const {
  std::uint64_t h = detail::hash_mix(e.from ^ 0x517CC1B727220A95ULL);
  h = detail::hash_mix(h ^ e.label);
  return static_cast<std::size_t>(detail::hash_mix(h ^ e.to));
}

std::uint32_t Saturator::add_state(std::string name) {
  auto id = static_cast<std::uint32_t>(names_.size());
  names_.push_back(std::move(name));
  final_.push_back(0);
  out_.emplace_back();
  eps_in_.emplace_back();
  internal_rules_.emplace_back();
  push_rules_.emplace_back();
  bottom_rules_.emplace_back();
  return id;
}

std::uint32_t Saturator::num_states() const {
  return static_cast<std::uint32_t>(names_.size());
}

void Saturator::mark_final(std::uint32_t s) { final_.at(s) = 1; }

void Saturator::insert_edge(std::uint32_t from, StackSymbol label,
                            std::uint32_t to) {
  if (!edge_set_.insert({from, label, to}).second) return;
  ++num_edges_;
  out_[from].push_back({label, to});
  if (label == kEpsilonLabel) eps_in_[to].push_back(from);
  work_.push_back({from, label, to});
}

void Saturator::add_edge(std::uint32_t from, StackSymbol label,
                         std::uint32_t to) {
  if (label == kEpsilonLabel) throw Error("cannot seed an epsilon edge");
  if (from >= names_.size() || to >= names_.size())
    throw Error("edge endpoint out of range");
  insert_edge(from, label, to);
}

void Saturator::add_internal_rule(std::uint32_t p, std::uint32_t q) {
  if (!push_unique(internal_rules_.at(p), q)) return;
  auto& out = out_[p];
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i].first != kEpsilonLabel) insert_edge(q, out[i].first, out[i].second);
}

void Saturator::add_push_rule(std::uint32_t p, std::uint32_t q,
                              StackSymbol push) {
  if (push == kBottom || push == kEpsilonLabel)
    throw Error("cannot push the bottom marker");
  auto [it, fresh] = push_mids_.try_emplace(pack(q, push), 0);
  if (fresh) {
    std::ostringstream name;
    name << "mid(" << names_.at(q) << ",#" << push << ')';
    it->second = add_state(name.str());
  }
  std::uint32_t mid = it->second;
  if (!push_unique(push_rules_.at(p), {q, push})) return;
  auto& out = out_[p];
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i].first != kEpsilonLabel) {
      insert_edge(q, push, mid);
      insert_edge(mid, out[i].first, out[i].second);
    }
}

void Saturator::add_pop_rule(std::uint32_t p, StackSymbol top,
                             std::uint32_t q) {
  if (top == kBottom) throw Error("cannot pop the bottom marker");
  if (top == kEpsilonLabel) throw Error("pop rule needs a stack symbol");
  if (!push_unique(pop_rules_[pack(p, top)], q)) return;
  auto& out = out_.at(p);
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i].first == top) insert_edge(q, kEpsilonLabel, out[i].second);
}

void Saturator::add_bottom_rule(std::uint32_t p, std::uint32_t q) {
  if (!push_unique(bottom_rules_.at(p), q)) return;
  auto& out = out_[p];
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i].first == kBottom) insert_edge(q, kBottom, out[i].second);
}

void Saturator::process(const PTransition& e) {
  // Left composition invariant: for every epsilon edge (x, s) and every edge
  // (s, l, t), the edge (x, l, t) is eventually materialized. eps_in_ is
  // appended at insertion time, so one of the two sides always sees the other.
  auto& eps = eps_in_[e.from];
  for (std::size_t i = 0; i < eps.size(); ++i)
    insert_edge(eps[i], e.label, e.to);

  if (e.label == kEpsilonLabel) {
    auto& out = out_[e.to];
    for (std::size_t i = 0; i < out.size(); ++i)
      insert_edge(e.from, out[i].first, out[i].second);
    return;
  }

  for (std::uint32_t q : internal_rules_[e.from])
    insert_edge(q, e.label, e.to);
  for (auto [q, push] : push_rules_[e.from]) {
    std::uint32_t mid = push_mids_.at(pack(q, push));
    insert_edge(q, push, mid);
    insert_edge(mid, e.label, e.to);
  }
  if (e.label == kBottom) {
    for (std::uint32_t q : bottom_rules_[e.from])
      insert_edge(q, kBottom, e.to);
  } else if (auto it = pop_rules_.find(pack(e.from, e.label));
             it != pop_rules_.end()) {
    for (std::uint32_t q : it->second)
      insert_edge(q, kEpsilonLabel, e.to);
  }
}

void Saturator::run(Budget& budget) {
  while (!work_.empty()) {
    budget.step();  // throws before dequeuing, so the edge is not lost
    PTransition e = work_.front();
    work_.pop_front();
    process(e);
  }
}

namespace {

// Backward analyses over a fixed edge list.
struct Acceptance {
  StateBits eps_to_final;  // reaches a final state over epsilon edges
  StateBits viable;        // accepts some word in (non-bottom)* bottom
};

Acceptance analyze(std::uint32_t num_states,
                   const std::vector<PTransition>& edges,
                   const StateBits& finals) {
  Acceptance acc{StateBits(num_states), StateBits(num_states)};
  std::vector<std::vector<std::uint32_t>> rev_eps(num_states);
  std::vector<std::vector<std::uint32_t>> rev_word(num_states);
  for (const PTransition& e : edges) {
    if (e.label == kEpsilonLabel) rev_eps[e.to].push_back(e.from);
  }

  std::vector<std::uint32_t> queue;
  finals.for_each([&](std::uint32_t f) {
    acc.eps_to_final.set(f);
    queue.push_back(f);
  });
  while (!queue.empty()) {
    std::uint32_t s = queue.back();
    queue.pop_back();
    for (std::uint32_t x : rev_eps[s])
      if (!acc.eps_to_final.test(x)) {
        acc.eps_to_final.set(x);
        queue.push_back(x);
      }
  }

  // viable: a bottom edge into eps_to_final seeds; any non-bottom edge
  // (stack symbol or epsilon) into a viable state propagates.
  for (const PTransition& e : edges) {
    if (e.label != kEpsilonLabel) continue;
    rev_word[e.to].push_back(e.from);
  }
  for (const PTransition& e : edges) {
    if (e.label == kEpsilonLabel || e.label == kBottom) continue;
    rev_word[e.to].push_back(e.from);
  }
  for (const PTransition& e : edges)
    if (e.label == kBottom && acc.eps_to_final.test(e.to) &&
        !acc.viable.test(e.from)) {
      acc.viable.set(e.from);
      queue.push_back(e.from);
    }
  while (!queue.empty()) {
    std::uint32_t s = queue.back();
    queue.pop_back();
    for (std::uint32_t x : rev_word[s])
      if (!acc.viable.test(x)) {
        acc.viable.set(x);
        queue.push_back(x);
      }
  }
  return acc;
}

std::vector<TopFact> facts_over(std::uint32_t num_states,
                                const std::vector<PTransition>& edges,
                                const StateBits& finals,
                                std::uint32_t source_limit, FactScope scope) {
  Acceptance acc = analyze(num_states, edges, finals);
  std::set<TopFact> facts;
  for (const PTransition& e : edges) {
    if (e.label == kEpsilonLabel || e.from >= source_limit) continue;
    if (scope == FactScope::Recognized) {
      bool live = e.label == kBottom ? acc.eps_to_final.test(e.to)
                                     : acc.viable.test(e.to);
      if (!live) continue;
    }
    facts.insert({e.from, e.label});
  }
  return {facts.begin(), facts.end()};
}

}  // namespace

std::vector<TopFact> Saturator::top_facts(FactScope scope) const {
  std::vector<PTransition> edges;
  edges.reserve(num_edges_);
  for (std::uint32_t s = 0; s < out_.size(); ++s)
    for (auto [label, to] : out_[s]) edges.push_back({s, label, to});
  StateBits finals(num_states());
  for (std::uint32_t s = 0; s < final_.size(); ++s)
    if (final_[s]) finals.set(s);
  return facts_over(num_states(), edges, finals, num_states(), scope);
}

PAutomaton Saturator::snapshot(std::uint32_t num_initials) const {
  PAutomaton pa;
  pa.num_states = num_states();
  pa.num_initials = num_initials;
  pa.transitions.reserve(num_edges_);
  for (std::uint32_t s = 0; s < out_.size(); ++s)
    for (auto [label, to] : out_[s]) pa.transitions.push_back({s, label, to});
  std::sort(pa.transitions.begin(), pa.transitions.end());
  for (std::uint32_t s = 0; s < final_.size(); ++s)
    if (final_[s]) pa.finals.push_back(s);
  pa.state_names = names_;
  return pa;
}

namespace {

bool set_bit(std::vector<std::uint64_t>& bits, StackSymbol g) {
  std::size_t word = g / 64;
  if (bits.size() <= word) bits.resize(word + 1, 0);
  std::uint64_t bit = std::uint64_t{1} << (g % 64);
  if (bits[word] & bit) return false;
  bits[word] |= bit;
  return true;
}

}  // namespace

std::uint32_t PairSaturator::add_control() {
  auto id = static_cast<std::uint32_t>(rows_.size());
  rows_.emplace_back();
  deltas_.emplace_back();
  flows_.emplace_back();
  queued_.push_back(0);
  return id;
}

StackSymbol PairSaturator::add_symbol(std::uint32_t pusher) {
  pushers_.push_back(pusher);
  return static_cast<StackSymbol>(pushers_.size());
}

void PairSaturator::set_pair(std::uint32_t q, StackSymbol g) {
  if (!set_bit(rows_.at(q), g)) return;
  set_bit(deltas_[q], g);
  ++num_pairs_;
  fresh_facts_.push_back({q, g});
  mark_dirty(q);
}

void PairSaturator::union_into(std::uint32_t v,
                               const std::vector<std::uint64_t>& src) {
  auto& row = rows_[v];
  auto& delta = deltas_[v];
  if (row.size() < src.size()) row.resize(src.size(), 0);
  if (delta.size() < src.size()) delta.resize(src.size(), 0);
  bool grew = false;
  for (std::size_t w = 0; w < src.size(); ++w) {
    std::uint64_t fresh = src[w] & ~row[w];
    if (!fresh) continue;
    row[w] |= fresh;
    delta[w] |= fresh;
    grew = true;
    do {
      int bit = std::countr_zero(fresh);
      fresh &= fresh - 1;
      ++num_pairs_;
      fresh_facts_.push_back({v, static_cast<StackSymbol>(w * 64 + bit)});
    } while (fresh);
  }
  if (grew) mark_dirty(v);
}

void PairSaturator::mark_dirty(std::uint32_t u) {
  if (queued_[u]) return;
  queued_[u] = 1;
  dirty_.push_back(u);
}

void PairSaturator::seed_empty(std::uint32_t q) { set_pair(q, kBottom); }

void PairSaturator::add_internal_edge(std::uint32_t u, std::uint32_t v) {
  if (u == v) return;
  if (!flow_seen_.insert(pack(u, v)).second) return;
  flows_.at(u).push_back(v);
  if (!rows_.at(u).empty()) union_into(v, rows_[u]);  // late edge: sync once
}

void PairSaturator::add_call_edge(std::uint32_t u, std::uint32_t v,
                                  StackSymbol g) {
  if (pushers_.at(g - 1) != u) throw Error("call edge from a non-pusher");
  set_pair(v, g);
}

void PairSaturator::add_pop_edge(StackSymbol g, std::uint32_t v) {
  add_internal_edge(pushers_.at(g - 1), v);
}

void PairSaturator::add_bottom_edge(std::uint32_t u, std::uint32_t v) {
  const auto& row = rows_.at(u);
  if (row.empty() || !(row[0] & 1))
    throw Error("bottom edge from a control not paired with the bottom");
  set_pair(v, kBottom);
}

void PairSaturator::run(Budget& budget) {
  while (!dirty_.empty()) {
    budget.step();  // throws before dequeuing, so the control stays queued
    std::uint32_t u = dirty_.front();
    dirty_.pop_front();
    queued_[u] = 0;
    for (std::uint32_t v : flows_[u]) union_into(v, deltas_[u]);
    deltas_[u].clear();
  }
}

std::vector<TopFact> PairSaturator::take_new_facts() {
  std::vector<TopFact> out;
  out.swap(fresh_facts_);
  return out;
}

PAutomaton saturate(const Vpa& m, Budget& budget) {
  Saturator sat;
  for (State q = 0; q < m.num_states(); ++q) sat.add_state(m.state_name(q));
  std::uint32_t accept = sat.add_state("accept");
  sat.mark_final(accept);
  for (State q0 : m.initials()) sat.add_edge(q0, kBottom, accept);

  std::set<std::pair<State, State>> internals, bottoms;
  std::set<std::tuple<State, State, StackSymbol>> pushes;
  std::set<std::tuple<State, StackSymbol, State>> pops;
  for (const InternalRule& r : m.internal_rules())
    internals.insert({r.from, r.to});
  for (const CallRule& r : m.call_rules())
    pushes.insert({r.from, r.to, r.push});
  for (const ReturnRule& r : m.return_rules()) {
    if (r.top == kBottom)
      bottoms.insert({r.from, r.to});
    else
      pops.insert({r.from, r.top, r.to});
  }
  for (auto [p, q] : internals) sat.add_internal_rule(p, q);
  for (auto [p, q] : bottoms) sat.add_bottom_rule(p, q);
  for (auto [p, q, g] : pushes) sat.add_push_rule(p, q, g);
  for (auto [p, g, q] : pops) sat.add_pop_rule(p, g, q);

  sat.run(budget);
  return sat.snapshot(m.num_states());
}

namespace {

StateBits closure(const std::vector<std::vector<std::uint32_t>>& eps_out,
                  StateBits from) {
  std::vector<std::uint32_t> queue = from.to_vector();
  while (!queue.empty()) {
    std::uint32_t s = queue.back();
    queue.pop_back();
    for (std::uint32_t t : eps_out[s])
      if (!from.test(t)) {
        from.set(t);
        queue.push_back(t);
      }
  }
  return from;
}

}  // namespace

bool recognizes(const PAutomaton& pa, const Configuration& c) {
  if (c.state >= pa.num_initials)
    throw Error("configuration state is not a pushdown control state");
  std::vector<std::vector<std::uint32_t>> eps_out(pa.num_states);
  std::vector<std::vector<std::pair<StackSymbol, std::uint32_t>>> out(
      pa.num_states);
  for (const PTransition& e : pa.transitions) {
    if (e.label == kEpsilonLabel)
      eps_out[e.from].push_back(e.to);
    else
      out[e.from].push_back({e.label, e.to});
  }
  StateBits cur(pa.num_states);
  cur.set(c.state);
  cur = closure(eps_out, std::move(cur));
  Word word(c.stack.begin(), c.stack.end());
  word.push_back(kBottom);
  for (StackSymbol letter : word) {
    StateBits next(pa.num_states);
    cur.for_each([&](std::uint32_t s) {
      for (auto [label, to] : out[s])
        if (label == letter) next.set(to);
    });
    cur = closure(eps_out, std::move(next));
    if (!cur.any()) return false;
  }
  for (std::uint32_t f : pa.finals)
    if (cur.test(f)) return true;
  return false;
}

std::set<Configuration> recognized_configurations(const PAutomaton& pa,
                                                  std::size_t max_height) {
  std::vector<std::vector<std::pair<StackSymbol, std::uint32_t>>> out(
      pa.num_states);
  for (const PTransition& e : pa.transitions)
    if (e.label != kEpsilonLabel) out[e.from].push_back({e.label, e.to});
  StateBits finals(pa.num_states);
  for (std::uint32_t f : pa.finals) finals.set(f);
  Acceptance acc = analyze(pa.num_states, pa.transitions, finals);

  std::set<Configuration> found;
  for (std::uint32_t q = 0; q < pa.num_initials; ++q) {
    std::vector<StackSymbol> prefix;
    std::set<std::pair<std::uint32_t, std::vector<StackSymbol>>> seen;
    auto walk = [&](auto&& self, std::uint32_t s) -> void {
      if (!seen.insert({s, prefix}).second) return;
      for (auto [label, to] : out[s]) {
        if (label == kBottom) {
          if (acc.eps_to_final.test(to)) found.insert({q, prefix});
        } else if (prefix.size() < max_height) {
          prefix.push_back(label);
          self(self, to);
          prefix.pop_back();
        }
      }
    };
    walk(walk, q);
  }
  return found;
}

std::vector<TopFact> top_facts(const PAutomaton& pa, FactScope scope) {
  StateBits finals(pa.num_states);
  for (std::uint32_t f : pa.finals) finals.set(f);
  return facts_over(pa.num_states, pa.transitions, finals, pa.num_initials,
                    scope);
}

bool is_language_empty(const Vpa& m, Budget& budget) {
  PAutomaton pa = saturate(m, budget);
  for (const TopFact& f : top_facts(pa, FactScope::Recognized))
    if (m.final_bits().test(f.source)) return false;
  return true;
}

void dump_edges(const PAutomaton& pa, std::ostream& out) {
  for (const PTransition& e : pa.transitions) {
    out << pa.state_names[e.from] << " -";
    if (e.label == kEpsilonLabel)
      out << "eps";
    else if (e.label == kBottom)
      out << "BOT";
    else
      out << '#' << e.label;
    out << "-> " << pa.state_names[e.to] << '\n';
  }
}

}  // namespace vpa
