#include "vpa/decide.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "vpa/budget.hpp"
#include "vpa/determinize.hpp"
#include "vpa/error.hpp"
#include "vpa/preach.hpp"

namespace vpa {

namespace {

std::uint64_t pack(std::uint32_t a, std::uint32_t b) {
  return (std::uint64_t{a} << 32) | b;
}

Budget make_budget(const DecisionOptions& opts) {
  Budget b;
  if (opts.timeout.count() > 0)
    b.set_deadline(std::chrono::steady_clock::now() + opts.timeout);
  if (opts.max_steps > 0) b.set_max_steps(opts.max_steps);
  return b;
}

// Product of the left automaton with the lazily determinized right side.
// States pair a left state with a summary state; stack labels pair a left
// stack symbol with a right frame, stamped by the pushing product state so
// the pair saturation stays exact. Return transitions are emitted only for
// (state, label) pairs the saturation proves to co-occur, and exploration
// stops at the first product state that accepts on the left but not on the
// right.
class ProductExplorer {
 public:
  ProductExplorer(const Vpa& a, const Vpa& b, Budget& budget,
                  DecisionStats& stats)
      : a_(a),
        b_(b),
        budget_(budget),
        stats_(stats),
        rels_(b),
        b_finals_(b.final_bits()) {}

  Outcome run() {
    State d0 = intern_d(initial_dstate(b_, DetMode::Optimized));
    for (State q0 : a_.initials()) pairs_.seed_empty(intern_product(q0, d0));
    drain_pending();
    if (rejected_) return finish(Outcome::Fails);

    for (;;) {
      pairs_.run(budget_);
      ++stats_.iterations;
      stats_.p_transitions = pairs_.num_pairs();
      bool changed = false;
      for (const TopFact& f : pairs_.take_new_facts()) {
        process_fact(f.source, f.top);
        changed = true;
      }
      drain_pending();
      if (rejected_) return finish(Outcome::Fails);
      if (!changed && pending_.empty() && pairs_.settled())
        return finish(Outcome::Holds);
    }
  }

 private:
  Outcome finish(Outcome out) {
    stats_.d_states = dstates_.size();
    stats_.p_transitions = pairs_.num_pairs();
    return out;
  }

  State intern_d(const DState& d) {
    auto& bucket = d_buckets_[d.hash()];
    for (State id : bucket)
      if (dstates_[id] == d) return id;
    auto id = static_cast<State>(dstates_.size());
    dstates_.push_back(d);
    bucket.push_back(id);
    stats_.d_states = dstates_.size();
    return id;
  }

  std::uint32_t intern_product(State p, State d) {
    auto [it, fresh] = product_ids_.try_emplace(pack(p, d), 0);
    if (!fresh) return it->second;
    budget_.step();
    auto pid = pairs_.add_control();  // control ids track product ids
    it->second = pid;
    p_of_.push_back(p);
    d_of_.push_back(d);
    pending_.push_back(pid);
    if (a_.final_bits().test(p) &&
        !is_final_dstate(dstates_[d], b_finals_, DetMode::Optimized))
      rejected_ = true;
    return pid;
  }

  // Right-side frame pushed by call a from summary state d.
  StackSymbol intern_bstack(State d, Symbol a) {
    auto [it, fresh] = bstack_ids_.try_emplace(pack(d, a), 0);
    if (fresh) {
      bstack_origins_.push_back({d, a});
      it->second = static_cast<StackSymbol>(bstack_origins_.size());
    }
    return it->second;
  }

  StackSymbol intern_label(std::uint32_t pusher, StackSymbol ga,
                           StackSymbol t) {
    auto [it, fresh] = label_ids_.try_emplace(std::tuple(pusher, ga, t), 0);
    if (fresh) {
      label_parts_.push_back({ga, t});
      it->second = pairs_.add_symbol(pusher);  // symbol ids track label_parts_
    }
    return it->second;
  }

  State d_internal_succ(State d, Symbol a) {
    auto [it, fresh] = int_succ_.try_emplace(pack(d, a), 0);
    if (fresh)
      it->second =
          intern_d(internal_successor(dstates_[d], rels_, a, DetMode::Optimized));
    return it->second;
  }

  State d_call_succ(State d, Symbol a) {
    auto [it, fresh] = call_succ_.try_emplace(pack(d, a), 0);
    if (fresh)
      it->second =
          intern_d(call_successor(dstates_[d], rels_, a, DetMode::Optimized));
    return it->second;
  }

  State d_bottom_succ(State d, Symbol a) {
    auto [it, fresh] = bottom_succ_.try_emplace(pack(d, a), 0);
    if (fresh)
      it->second = intern_d(
          bottom_return_successor(dstates_[d], rels_, a, DetMode::Optimized));
    return it->second;
  }

  State d_pop_succ(StackSymbol t, State d, Symbol a) {
    auto [it, fresh] = pop_succ_.try_emplace(std::tuple(t, d, a), 0);
    if (fresh) {
      auto [frame_d, frame_call] = bstack_origins_[t - 1];
      it->second = intern_d(pop_successor(dstates_[frame_d], frame_call,
                                          dstates_[d], rels_, a,
                                          DetMode::Optimized));
    }
    return it->second;
  }

  // Internal and call transitions are enabled in every configuration, so
  // they are emitted as soon as a product state exists.
  void drain_pending() {
    while (!pending_.empty() && !rejected_) {
      std::uint32_t pid = pending_.front();
      pending_.pop_front();
      State p = p_of_[pid];
      State d = d_of_[pid];
      for (Symbol a : a_.alphabet().internals()) {
        State dn = d_internal_succ(d, a);
        for (const InternalRule& r : a_.internals_from(p, a)) {
          std::uint32_t succ = intern_product(r.to, dn);
          pairs_.add_internal_edge(pid, succ);
        }
      }
      for (Symbol a : a_.alphabet().calls()) {
        State dn = d_call_succ(d, a);
        StackSymbol t = intern_bstack(d, a);
        for (const CallRule& r : a_.calls_from(p, a)) {
          std::uint32_t succ = intern_product(r.to, dn);
          pairs_.add_call_edge(pid, succ, intern_label(pid, r.push, t));
        }
      }
    }
  }

  void process_fact(std::uint32_t pid, StackSymbol label) {
    budget_.step();
    State p = p_of_[pid];
    State d = d_of_[pid];
    if (label == kBottom) {
      for (Symbol a : a_.alphabet().returns()) {
        State dn = d_bottom_succ(d, a);
        for (const ReturnRule& r : a_.returns_from(p, a, kBottom)) {
          std::uint32_t succ = intern_product(r.to, dn);
          pairs_.add_bottom_edge(pid, succ);
        }
      }
      return;
    }
    auto [ga, t] = label_parts_[label - 1];
    for (Symbol a : a_.alphabet().returns()) {
      State dn = d_pop_succ(t, d, a);
      for (const ReturnRule& r : a_.returns_from(p, a, ga)) {
        std::uint32_t succ = intern_product(r.to, dn);
        pairs_.add_pop_edge(label, succ);
      }
    }
  }

  const Vpa& a_;
  const Vpa& b_;
  Budget& budget_;
  DecisionStats& stats_;
  RelationIndex rels_;
  StateBits b_finals_;
  bool rejected_ = false;

  std::vector<DState> dstates_;
  std::unordered_map<std::uint64_t, std::vector<State>> d_buckets_;

  std::vector<State> p_of_;
  std::vector<State> d_of_;
  std::unordered_map<std::uint64_t, std::uint32_t> product_ids_;
  std::deque<std::uint32_t> pending_;

  std::vector<std::pair<State, Symbol>> bstack_origins_;
  std::unordered_map<std::uint64_t, StackSymbol> bstack_ids_;
  std::vector<std::pair<StackSymbol, StackSymbol>> label_parts_;
  std::map<std::tuple<std::uint32_t, StackSymbol, StackSymbol>, StackSymbol>
      label_ids_;

  std::unordered_map<std::uint64_t, State> int_succ_;
  std::unordered_map<std::uint64_t, State> call_succ_;
  std::unordered_map<std::uint64_t, State> bottom_succ_;
  std::map<std::tuple<StackSymbol, State, Symbol>, State> pop_succ_;

  PairSaturator pairs_;
};

void require_same_alphabet(const Vpa& a, const Vpa& b) {
  if (!(a.alphabet() == b.alphabet()))
    throw Error("automata use different alphabets");
}

Verdict decide_inclusion_on_the_fly(const Vpa& a, const Vpa& b,
                                    const DecisionOptions& opts) {
  require_same_alphabet(a, b);
  Verdict v;
  Budget budget = make_budget(opts);
  try {
    ProductExplorer explorer(a, b, budget, v.stats);
    v.outcome = explorer.run();
  } catch (const BudgetExceeded&) {
    v.outcome = Outcome::TimedOut;
    return v;
  }
  if (v.outcome == Outcome::Fails && opts.find_witness)
    v.witness = find_counterexample(a, b, opts.witness_max_len);
  return v;
}

Verdict decide_inclusion_standard(const Vpa& a, const Vpa& b,
                                  const DecisionOptions& opts) {
  require_same_alphabet(a, b);
  Verdict v;
  Budget budget = make_budget(opts);
  try {
    DeterminizeOptions det_opts;
    det_opts.mode = DetMode::Optimized;
    det_opts.pop_scope = PopScope::AllGenerated;
    DeterminizedVpa det = determinize(b, det_opts, budget);
    v.stats.d_states = det.stats.num_dstates;
    Vpa comp = complement_deterministic(det.automaton);
    Vpa prod = product(a, comp);
    PAutomaton pa = saturate(prod, budget);
    v.stats.p_transitions = pa.transitions.size();
    v.outcome = Outcome::Holds;
    for (const TopFact& f : top_facts(pa, FactScope::Recognized))
      if (prod.final_bits().test(f.source)) {
        v.outcome = Outcome::Fails;
        break;
      }
  } catch (const BudgetExceeded&) {
    v.outcome = Outcome::TimedOut;
    return v;
  }
  if (v.outcome == Outcome::Fails && opts.find_witness)
    v.witness = find_counterexample(a, b, opts.witness_max_len);
  return v;
}

}  // namespace

Vpa make_universal_acceptor(const PartitionedAlphabet& alphabet) {
  VpaBuilder b(alphabet);
  State q = b.add_state("q0");
  StackSymbol g = b.add_stack_symbol("g");
  b.mark_initial(q);
  b.mark_final(q);
  for (Symbol a : alphabet.calls()) b.add_call_rule(q, a, q, g);
  for (Symbol a : alphabet.returns()) {
    b.add_return_rule(q, a, g, q);
    b.add_return_rule(q, a, kBottom, q);
  }
  for (Symbol a : alphabet.internals()) b.add_internal_rule(q, a, q);
  return b.build();
}

std::optional<Word> find_counterexample(const Vpa& a, const Vpa& b,
                                        std::size_t max_len) {
  require_same_alphabet(a, b);
  using Configs = std::vector<Configuration>;
  auto accepting = [](const Vpa& m, const Configs& cs) {
    for (const Configuration& c : cs)
      if (m.final_bits().test(c.state)) return true;
    return false;
  };
  auto advance = [](const Vpa& m, const Configs& cs, Symbol x) {
    std::set<Configuration> next;
    for (const Configuration& c : cs)
      for (Configuration& d : step(m, c, x)) next.insert(std::move(d));
    return Configs(next.begin(), next.end());
  };

  struct Node {
    Word word;
    Configs ca, cb;
  };
  Configs ia, ib;
  for (State q : a.initials()) ia.push_back({q, {}});
  for (State q : b.initials()) ib.push_back({q, {}});
  std::sort(ia.begin(), ia.end());
  std::sort(ib.begin(), ib.end());

  std::deque<Node> queue{{Word{}, std::move(ia), std::move(ib)}};
  std::set<std::pair<Configs, Configs>> seen{{queue[0].ca, queue[0].cb}};
  while (!queue.empty()) {
    Node n = std::move(queue.front());
    queue.pop_front();
    if (accepting(a, n.ca) && !accepting(b, n.cb)) return n.word;
    if (n.word.size() == max_len) continue;
    for (Symbol x = 0; x < a.alphabet().size(); ++x) {
      Node next{n.word, advance(a, n.ca, x), advance(b, n.cb, x)};
      next.word.push_back(x);
      if (next.ca.empty()) continue;  // nothing left to accept on the left
      if (!seen.insert({next.ca, next.cb}).second) continue;
      queue.push_back(std::move(next));
    }
  }
  return std::nullopt;
}

Verdict universality_on_the_fly(const Vpa& m, const DecisionOptions& opts) {
  return decide_inclusion_on_the_fly(make_universal_acceptor(m.alphabet()), m,
                                     opts);
}

Verdict universality_standard(const Vpa& m, const DecisionOptions& opts) {
  Verdict v;
  Budget budget = make_budget(opts);
  try {
    DeterminizeOptions det_opts;
    det_opts.mode = DetMode::Optimized;
    det_opts.pop_scope = PopScope::AllGenerated;
    DeterminizedVpa det = determinize(m, det_opts, budget);
    v.stats.d_states = det.stats.num_dstates;
    PAutomaton pa = saturate(det.automaton, budget);
    v.stats.p_transitions = pa.transitions.size();
    v.outcome = Outcome::Holds;
    for (const TopFact& f : top_facts(pa, FactScope::Recognized))
      if (!det.automaton.final_bits().test(f.source)) {
        v.outcome = Outcome::Fails;
        break;
      }
  } catch (const BudgetExceeded&) {
    v.outcome = Outcome::TimedOut;
    return v;
  }
  if (v.outcome == Outcome::Fails && opts.find_witness)
    v.witness = find_counterexample(make_universal_acceptor(m.alphabet()), m,
                                    opts.witness_max_len);
  return v;
}

Verdict inclusion_on_the_fly(const Vpa& a, const Vpa& b,
                             const DecisionOptions& opts) {
  return decide_inclusion_on_the_fly(a, b, opts);
}

Verdict inclusion_standard(const Vpa& a, const Vpa& b,
                           const DecisionOptions& opts) {
  return decide_inclusion_standard(a, b, opts);
}

}  // namespace vpa
