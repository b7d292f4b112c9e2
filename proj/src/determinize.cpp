#include "vpa/determinize.hpp"

#include <deque>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "vpa/preach.hpp"

namespace vpa {

std::uint64_t DState::hash() const {
  return detail::hash_mix(summary.hash() ^
                          detail::hash_mix(reach.hash() + 0x9E3779B97F4A7C15ULL));
}

RelationIndex::RelationIndex(const Vpa& m)
    : n_(m.num_states()),
      num_stack_(m.num_stack_symbols()),
      call_base_(0),
      return_base_(m.alphabet().call_count()),
      internal_base_(m.alphabet().call_count() + m.alphabet().return_count()) {
  const PartitionedAlphabet& al = m.alphabet();
  call_rels_.assign(std::size_t{al.call_count()} * num_stack_,
                    BitRelation(n_));
  call_any_.assign(al.call_count(), BitRelation(n_));
  return_rels_.assign(std::size_t{al.return_count()} * num_stack_,
                      BitRelation(n_));
  internal_rels_.assign(al.internal_count(), BitRelation(n_));
  for (const CallRule& r : m.call_rules()) {
    call_rels_[std::size_t{r.symbol - call_base_} * num_stack_ + r.push].set(
        r.from, r.to);
    call_any_[r.symbol - call_base_].set(r.from, r.to);
  }
  for (const ReturnRule& r : m.return_rules())
    return_rels_[std::size_t{r.symbol - return_base_} * num_stack_ + r.top]
        .set(r.from, r.to);
  for (const InternalRule& r : m.internal_rules())
    internal_rels_[r.symbol - internal_base_].set(r.from, r.to);
}

const BitRelation& RelationIndex::internal_rel(Symbol a) const {
  return internal_rels_.at(a - internal_base_);
}

const BitRelation& RelationIndex::call_rel(Symbol a, StackSymbol push) const {
  return call_rels_.at(std::size_t{a - call_base_} * num_stack_ + push);
}

const BitRelation& RelationIndex::call_any(Symbol a) const {
  return call_any_.at(a - call_base_);
}

const BitRelation& RelationIndex::return_rel(Symbol a, StackSymbol top) const {
  return return_rels_.at(std::size_t{a - return_base_} * num_stack_ + top);
}

namespace {

StateBits all_states(std::uint32_t n) {
  StateBits b(n);
  for (std::uint32_t q = 0; q < n; ++q) b.set(q);
  return b;
}

}  // namespace

DState initial_dstate(const Vpa& m, DetMode mode) {
  std::uint32_t n = m.num_states();
  StateBits init(n);
  for (State q : m.initials()) init.set(q);
  DState d;
  d.summary = BitRelation::identity_over(
      mode == DetMode::Original ? all_states(n) : init);
  if (mode != DetMode::Optimized) d.reach = init;
  return d;
}

DState internal_successor(const DState& d, const RelationIndex& rels,
                          Symbol a, DetMode mode) {
  const BitRelation& rel = rels.internal_rel(a);
  DState out;
  out.summary = d.summary.compose(rel);
  if (mode != DetMode::Optimized) out.reach = rel.image(d.reach);
  return out;
}

DState bottom_return_successor(const DState& d, const RelationIndex& rels,
                               Symbol a, DetMode mode) {
  const BitRelation& rel = rels.return_rel(a, kBottom);
  DState out;
  out.summary = d.summary.compose(rel);
  if (mode != DetMode::Optimized) out.reach = rel.image(d.reach);
  return out;
}

DState call_successor(const DState& d, const RelationIndex& rels, Symbol a,
                      DetMode mode) {
  StateBits base =
      mode == DetMode::Optimized ? d.summary.range() : d.reach;
  StateBits entered = rels.call_any(a).image(base);
  DState out;
  out.summary = BitRelation::identity_over(
      mode == DetMode::Original ? all_states(rels.num_states()) : entered);
  if (mode != DetMode::Optimized) out.reach = std::move(entered);
  return out;
}

DState pop_successor(const DState& frame, Symbol frame_call,
                     const DState& current, const RelationIndex& rels,
                     Symbol ret, DetMode mode) {
  // update maps a pre-call state to the states reachable after the matching
  // return: call edge, then the segment summary, then the return edge, for
  // any agreeing stack symbol.
  BitRelation segment = mode == DetMode::Original
                            ? current.summary.with_columns(current.reach)
                            : current.summary;
  BitRelation update(rels.num_states());
  for (StackSymbol g = 1; g < rels.num_stack_symbols(); ++g) {
    const BitRelation& push = rels.call_rel(frame_call, g);
    if (push.empty()) continue;
    update |= push.compose(segment).compose(rels.return_rel(ret, g));
  }
  DState out;
  out.summary = frame.summary.compose(update);
  if (mode != DetMode::Optimized) out.reach = update.image(frame.reach);
  return out;
}

bool is_final_dstate(const DState& d, const StateBits& finals, DetMode mode) {
  if (mode == DetMode::Optimized) return d.summary.range().intersects(finals);
  return d.reach.intersects(finals);
}

std::string dstate_name(const DState& d, const Vpa& m, DetMode mode) {
  std::ostringstream out;
  if (mode != DetMode::Optimized) out << '(';
  out << '{';
  bool first = true;
  d.summary.for_each_pair([&](std::uint32_t q1, std::uint32_t q2) {
    if (!first) out << ',';
    first = false;
    out << '(' << m.state_name(q1) << ',' << m.state_name(q2) << ')';
  });
  out << '}';
  if (mode != DetMode::Optimized) {
    out << ",{";
    first = true;
    d.reach.for_each([&](std::uint32_t q) {
      if (!first) out << ',';
      first = false;
      out << m.state_name(q);
    });
    out << "})";
  }
  return out.str();
}

namespace {

std::uint64_t pack(std::uint32_t a, std::uint32_t b) {
  return (std::uint64_t{a} << 32) | b;
}

class Determinizer {
 public:
  Determinizer(const Vpa& m, const DeterminizeOptions& opts, Budget& budget)
      : m_(m),
        opts_(opts),
        budget_(budget),
        rels_(m),
        finals_(m.final_bits()),
        rf_(opts.pop_scope == PopScope::ReachableFacts),
        verbose_names_(m.num_states() <= 12) {}

  DeterminizedVpa run() {
    State d0 = intern(initial_dstate(m_, opts_.mode));
    if (rf_) {
      pairs_.seed_empty(d0);
      run_reachable_facts();
    } else {
      run_all_generated();
    }
    return finish();
  }

 private:
  State intern(const DState& d) {
    std::uint64_t h = d.hash();
    auto [it, fresh] = buckets_.try_emplace(h);
    for (State id : it->second)
      if (dstates_[id] == d) return id;
    budget_.step();
    auto id = static_cast<State>(dstates_.size());
    dstates_.push_back(d);
    it->second.push_back(id);
    pending_d_.push_back(id);
    if (rf_) pairs_.add_control();  // control ids track d-state ids
    return id;
  }

  StackSymbol intern_stack(State d, Symbol call) {
    auto [it, fresh] = stack_ids_.try_emplace(pack(d, call), 0);
    if (fresh) {
      origins_.push_back({d, call});
      it->second = static_cast<StackSymbol>(origins_.size());
      if (rf_) pairs_.add_symbol(d);  // symbol ids track origins_
    }
    return it->second;
  }

  // Internal and call transitions of one d-state; they apply under any
  // stack. Bottom returns apply only at the empty stack, so the reachable
  // fixpoint defers them to a bottom co-occurrence fact; the complete scope
  // emits them here.
  void process_dstate(State d) {
    DState cur = dstates_[d];  // copy: interning may grow dstates_
    for (Symbol a : m_.alphabet().internals()) {
      State succ = intern(internal_successor(cur, rels_, a, opts_.mode));
      internal_out_.push_back({d, a, succ});
      if (rf_) pairs_.add_internal_edge(d, succ);
    }
    for (Symbol a : m_.alphabet().calls()) {
      State succ = intern(call_successor(cur, rels_, a, opts_.mode));
      StackSymbol g = intern_stack(d, a);
      call_out_.push_back({d, a, succ, g});
      if (rf_) pairs_.add_call_edge(d, succ, g);
    }
    if (!rf_) {
      for (Symbol a : m_.alphabet().returns()) {
        State succ = intern(bottom_return_successor(cur, rels_, a, opts_.mode));
        return_out_.push_back({d, a, kBottom, succ});
      }
    }
  }

  // Bottom-return transitions of d, once d is known to occur with an empty
  // stack.
  void process_bottom(State d) {
    budget_.step();
    DState cur = dstates_[d];
    for (Symbol a : m_.alphabet().returns()) {
      State succ = intern(bottom_return_successor(cur, rels_, a, opts_.mode));
      return_out_.push_back({d, a, kBottom, succ});
      pairs_.add_bottom_edge(d, succ);
    }
  }

  // Return transitions of d popping stack symbol g (>= 1).
  void process_pop(State d, StackSymbol g) {
    budget_.step();
    auto [frame_d, frame_call] = origins_[g - 1];
    DState cur = dstates_[d];
    DState frame = dstates_[frame_d];
    for (Symbol a : m_.alphabet().returns()) {
      State succ =
          intern(pop_successor(frame, frame_call, cur, rels_, a, opts_.mode));
      return_out_.push_back({d, a, g, succ});
      if (rf_) pairs_.add_pop_edge(g, succ);
    }
  }

  void run_all_generated() {
    // Each (d-state, stack symbol) pair is popped exactly once. The processed
    // region is a rectangle [0, d_done) x [1, g_done]; every round extends it
    // to the current totals and sweeps only the new strip, so no pair queue or
    // seen-set is needed.
    std::size_t d_done = 0, g_done = 0;
    for (;;) {
      while (!pending_d_.empty()) {
        State d = pending_d_.front();
        pending_d_.pop_front();
        process_dstate(d);
      }
      std::size_t d_total = dstates_.size();
      std::size_t g_total = origins_.size();  // grows only in process_dstate
      if (d_done == d_total && g_done == g_total) break;
      for (State d = 0; d < d_done; ++d)
        for (std::size_t g = g_done + 1; g <= g_total; ++g)
          process_pop(d, static_cast<StackSymbol>(g));
      for (State d = static_cast<State>(d_done); d < d_total; ++d)
        for (std::size_t g = 1; g <= g_total; ++g)
          process_pop(d, static_cast<StackSymbol>(g));
      d_done = d_total;
      g_done = g_total;
    }
  }

  void run_reachable_facts() {
    for (;;) {
      while (!pending_d_.empty()) {
        State d = pending_d_.front();
        pending_d_.pop_front();
        process_dstate(d);
      }
      pairs_.run(budget_);
      bool changed = false;
      for (const TopFact& f : pairs_.take_new_facts()) {
        if (f.top == kBottom)
          process_bottom(f.source);
        else
          process_pop(f.source, f.top);
        changed = true;
      }
      if (!changed && pending_d_.empty() && pairs_.settled()) break;
    }
  }

  DeterminizedVpa finish() {
    VpaBuilder b(m_.alphabet());
    for (State d = 0; d < dstates_.size(); ++d)
      b.add_state(verbose_names_ ? dstate_name(dstates_[d], m_, opts_.mode)
                                 : "d" + std::to_string(d));
    for (std::size_t i = 0; i < origins_.size(); ++i) {
      if (verbose_names_) {
        std::ostringstream name;
        name << '(' << dstate_name(dstates_[origins_[i].first], m_, opts_.mode)
             << ',' << m_.alphabet().name(origins_[i].second) << ')';
        b.add_stack_symbol(name.str());
      } else {
        b.add_stack_symbol("s" + std::to_string(i + 1));
      }
    }
    b.mark_initial(0);
    for (State d = 0; d < dstates_.size(); ++d)
      if (is_final_dstate(dstates_[d], finals_, opts_.mode)) b.mark_final(d);
    for (const CallRule& r : call_out_)
      b.add_call_rule(r.from, r.symbol, r.to, r.push);
    for (const ReturnRule& r : return_out_)
      b.add_return_rule(r.from, r.symbol, r.top, r.to);
    for (const InternalRule& r : internal_out_)
      b.add_internal_rule(r.from, r.symbol, r.to);

    DeterminizedVpa out{b.build(), std::move(dstates_), std::move(origins_),
                        DeterminizeStats{}};
    out.stats.num_dstates = out.dstates.size();
    out.stats.num_stack_symbols = out.stack_origins.size();
    out.stats.num_transitions =
        call_out_.size() + return_out_.size() + internal_out_.size();
    out.stats.saturation_facts = pairs_.num_pairs();
    return out;
  }

  const Vpa& m_;
  DeterminizeOptions opts_;
  Budget& budget_;
  RelationIndex rels_;
  StateBits finals_;
  bool rf_;
  bool verbose_names_;

  std::vector<DState> dstates_;
  std::unordered_map<std::uint64_t, std::vector<State>> buckets_;
  std::deque<State> pending_d_;
  std::vector<std::pair<State, Symbol>> origins_;
  std::unordered_map<std::uint64_t, StackSymbol> stack_ids_;

  std::vector<CallRule> call_out_;
  std::vector<ReturnRule> return_out_;
  std::vector<InternalRule> internal_out_;

  PairSaturator pairs_;  // ReachableFacts scope only
};

}  // namespace

DeterminizedVpa determinize(const Vpa& m, const DeterminizeOptions& opts,
                            Budget& budget) {
  return Determinizer(m, opts, budget).run();
}

DeterminizedVpa determinize(const Vpa& m, const DeterminizeOptions& opts) {
  Budget budget;
  return determinize(m, opts, budget);
}

}  // namespace vpa
