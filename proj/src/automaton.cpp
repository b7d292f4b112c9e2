#include "vpa/automaton.hpp"

#include <algorithm>
#include <utility>

#include "vpa/error.hpp"

namespace vpa {

namespace {

/// Offset table for rules sorted by (class-relative symbol, from): slot s
/// covers rules[index[s] .. index[s+1]).
template <typename Rule>
std::vector<std::uint32_t> make_index(const std::vector<Rule>& rules,
                                      std::size_t num_symbols,
                                      std::uint32_t num_states, Symbol base) {
  std::vector<std::uint32_t> index(num_symbols * num_states + 1, 0);
  for (const Rule& r : rules) {
    std::size_t slot = std::size_t{r.symbol - base} * num_states + r.from;
    ++index[slot + 1];
  }
  for (std::size_t i = 1; i < index.size(); ++i) index[i] += index[i - 1];
  return index;
}

template <typename Rule>
std::span<const Rule> slot_span(const std::vector<Rule>& rules,
                                const std::vector<std::uint32_t>& index,
                                std::size_t slot) {
  return {rules.data() + index[slot], rules.data() + index[slot + 1]};
}

}  // namespace

std::optional<State> Vpa::find_state(std::string_view name) const {
  for (State q = 0; q < state_names_.size(); ++q)
    if (state_names_[q] == name) return q;
  return std::nullopt;
}

std::optional<StackSymbol> Vpa::find_stack_symbol(std::string_view name) const {
  for (StackSymbol g = 0; g < stack_names_.size(); ++g)
    if (stack_names_[g] == name) return g;
  return std::nullopt;
}

bool Vpa::is_initial(State q) const {
  return std::binary_search(initials_.begin(), initials_.end(), q);
}

void Vpa::build_indexes() {
  // Slot layout in make_index requires (symbol, from) major order; return
  // rules additionally need (top, to) within a slot for the binary search in
  // returns_from.
  auto call_key = [](const CallRule& r) {
    return std::tuple(r.symbol, r.from, r.to, r.push);
  };
  auto return_key = [](const ReturnRule& r) {
    return std::tuple(r.symbol, r.from, r.top, r.to);
  };
  auto internal_key = [](const InternalRule& r) {
    return std::tuple(r.symbol, r.from, r.to);
  };
  auto by = [](auto key) {
    return [key](const auto& x, const auto& y) { return key(x) < key(y); };
  };
  std::sort(call_rules_.begin(), call_rules_.end(), by(call_key));
  call_rules_.erase(std::unique(call_rules_.begin(), call_rules_.end()),
                    call_rules_.end());
  std::sort(return_rules_.begin(), return_rules_.end(), by(return_key));
  return_rules_.erase(std::unique(return_rules_.begin(), return_rules_.end()),
                      return_rules_.end());
  std::sort(internal_rules_.begin(), internal_rules_.end(), by(internal_key));
  internal_rules_.erase(
      std::unique(internal_rules_.begin(), internal_rules_.end()),
      internal_rules_.end());

  std::uint32_t n = num_states();
  call_index_ = make_index(call_rules_, alphabet_.call_count(), n, 0);
  return_index_ =
      make_index(return_rules_, alphabet_.return_count(), n,
                 static_cast<Symbol>(alphabet_.call_count()));
  internal_index_ = make_index(
      internal_rules_, alphabet_.internal_count(), n,
      static_cast<Symbol>(alphabet_.call_count() + alphabet_.return_count()));
}

std::span<const CallRule> Vpa::call_rules_of(Symbol a) const {
  std::size_t n = num_states();
  std::size_t first = std::size_t{a} * n;
  return {call_rules_.data() + call_index_[first],
          call_rules_.data() + call_index_[first + n]};
}

std::span<const ReturnRule> Vpa::return_rules_of(Symbol a) const {
  std::size_t n = num_states();
  std::size_t first = std::size_t{a - alphabet_.call_count()} * n;
  return {return_rules_.data() + return_index_[first],
          return_rules_.data() + return_index_[first + n]};
}

std::span<const InternalRule> Vpa::internal_rules_of(Symbol a) const {
  std::size_t n = num_states();
  std::size_t first =
      std::size_t{a - alphabet_.call_count() - alphabet_.return_count()} * n;
  return {internal_rules_.data() + internal_index_[first],
          internal_rules_.data() + internal_index_[first + n]};
}

std::span<const CallRule> Vpa::calls_from(State q, Symbol a) const {
  return slot_span(call_rules_, call_index_,
                   std::size_t{a} * num_states() + q);
}

std::span<const InternalRule> Vpa::internals_from(State q, Symbol a) const {
  std::size_t pos = a - alphabet_.call_count() - alphabet_.return_count();
  return slot_span(internal_rules_, internal_index_,
                   pos * num_states() + q);
}

std::span<const ReturnRule> Vpa::returns_from(State q, Symbol a) const {
  std::size_t pos = a - alphabet_.call_count();
  return slot_span(return_rules_, return_index_, pos * num_states() + q);
}

std::span<const ReturnRule> Vpa::returns_from(State q, Symbol a,
                                              StackSymbol top) const {
  auto span = returns_from(q, a);
  auto lo = std::lower_bound(
      span.begin(), span.end(), top,
      [](const ReturnRule& r, StackSymbol t) { return r.top < t; });
  auto hi = std::upper_bound(
      span.begin(), span.end(), top,
      [](StackSymbol t, const ReturnRule& r) { return t < r.top; });
  return {lo, hi};
}

bool Vpa::operator==(const Vpa& o) const {
  return alphabet_ == o.alphabet_ && state_names_ == o.state_names_ &&
         stack_names_ == o.stack_names_ && initials_ == o.initials_ &&
         finals_ == o.finals_ && call_rules_ == o.call_rules_ &&
         return_rules_ == o.return_rules_ &&
         internal_rules_ == o.internal_rules_;
}

VpaBuilder::VpaBuilder(PartitionedAlphabet alphabet)
    : vpa_(std::move(alphabet)) {
  vpa_.stack_names_.push_back("BOT");
}

State VpaBuilder::add_state(std::string name) {
  if (name.empty()) throw Error("empty state name");
  State id = static_cast<State>(vpa_.state_names_.size());
  if (!state_ids_.emplace(name, id).second)
    throw Error("duplicate state '" + name + "'");
  vpa_.state_names_.push_back(std::move(name));
  return id;
}

StackSymbol VpaBuilder::add_stack_symbol(std::string name) {
  if (name.empty()) throw Error("empty stack symbol name");
  if (name == "BOT") throw Error("stack symbol name 'BOT' is reserved");
  StackSymbol id = static_cast<StackSymbol>(vpa_.stack_names_.size());
  if (!stack_ids_.emplace(name, id).second)
    throw Error("duplicate stack symbol '" + name + "'");
  vpa_.stack_names_.push_back(std::move(name));
  return id;
}

void VpaBuilder::check_state(State q, const char* role) const {
  if (q >= vpa_.num_states())
    throw Error(std::string("unknown ") + role + " state id");
}

void VpaBuilder::check_stack(StackSymbol g) const {
  if (g >= vpa_.stack_names_.size()) throw Error("unknown stack symbol id");
}

void VpaBuilder::check_class(Symbol a, SymbolClass expected) const {
  if (!vpa_.alphabet_.contains(a)) throw Error("symbol not in the alphabet");
  if (vpa_.alphabet_.class_of(a) != expected)
    throw Error("symbol '" + vpa_.alphabet_.name(a) +
                "' has the wrong class for this rule");
}

void VpaBuilder::mark_initial(State q) {
  check_state(q, "initial");
  initial_set_.insert(q);
}

void VpaBuilder::mark_final(State q) {
  check_state(q, "final");
  final_set_.insert(q);
}

void VpaBuilder::add_call_rule(State from, Symbol a, State to,
                               StackSymbol push) {
  check_state(from, "source");
  check_state(to, "target");
  check_class(a, SymbolClass::Call);
  check_stack(push);
  if (push == kBottom) throw Error("call rule must not push the bottom marker");
  vpa_.call_rules_.push_back({from, a, to, push});
}

void VpaBuilder::add_return_rule(State from, Symbol a, StackSymbol top,
                                 State to) {
  check_state(from, "source");
  check_state(to, "target");
  check_class(a, SymbolClass::Return);
  check_stack(top);
  vpa_.return_rules_.push_back({from, a, top, to});
}

void VpaBuilder::add_internal_rule(State from, Symbol a, State to) {
  check_state(from, "source");
  check_state(to, "target");
  check_class(a, SymbolClass::Internal);
  vpa_.internal_rules_.push_back({from, a, to});
}

Vpa VpaBuilder::build() {
  if (built_) throw Error("VpaBuilder::build called twice");
  built_ = true;
  vpa_.initials_.assign(initial_set_.begin(), initial_set_.end());
  vpa_.finals_.assign(final_set_.begin(), final_set_.end());
  vpa_.final_bits_ = StateBits(vpa_.num_states());
  for (State q : vpa_.finals_) vpa_.final_bits_.set(q);
  vpa_.build_indexes();
  return std::move(vpa_);
}

namespace {

void check_config(const Vpa& m, const Configuration& c) {
  if (c.state >= m.num_states())
    throw Error("configuration references an unknown state");
  for (StackSymbol g : c.stack) {
    if (g == kBottom)
      throw Error("configuration stack must not contain the bottom marker");
    if (g >= m.num_stack_symbols())
      throw Error("configuration references an unknown stack symbol");
  }
}

}  // namespace

std::vector<Configuration> step(const Vpa& m, const Configuration& c,
                                Symbol a) {
  if (!m.alphabet().contains(a)) throw Error("symbol not in the alphabet");
  check_config(m, c);
  std::vector<Configuration> out;
  switch (m.alphabet().class_of(a)) {
    case SymbolClass::Call:
      for (const CallRule& r : m.calls_from(c.state, a)) {
        Configuration d;
        d.state = r.to;
        d.stack.reserve(c.stack.size() + 1);
        d.stack.push_back(r.push);
        d.stack.insert(d.stack.end(), c.stack.begin(), c.stack.end());
        out.push_back(std::move(d));
      }
      break;
    case SymbolClass::Return:
      if (c.stack.empty()) {
        // Bottom is read but not popped.
        for (const ReturnRule& r : m.returns_from(c.state, a, kBottom))
          out.push_back({r.to, {}});
      } else {
        for (const ReturnRule& r : m.returns_from(c.state, a, c.stack[0]))
          out.push_back(
              {r.to, std::vector<StackSymbol>(c.stack.begin() + 1,
                                              c.stack.end())});
      }
      break;
    case SymbolClass::Internal:
      for (const InternalRule& r : m.internals_from(c.state, a))
        out.push_back({r.to, c.stack});
      break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool accepts(const Vpa& m, const Word& w) {
  std::set<Configuration> current;
  for (State q0 : m.initials()) current.insert({q0, {}});
  for (Symbol a : w) {
    std::set<Configuration> next;
    for (const Configuration& c : current)
      for (Configuration& d : step(m, c, a)) next.insert(std::move(d));
    current = std::move(next);
    if (current.empty()) return false;
  }
  for (const Configuration& c : current)
    if (m.is_final(c.state)) return true;
  return false;
}

Vpa product(const Vpa& a, const Vpa& b) {
  if (!(a.alphabet() == b.alphabet()))
    throw Error("product requires identical partitioned alphabets");
  VpaBuilder pb(a.alphabet());
  auto pair_id = [&](State p, State q) {
    return static_cast<State>(p * b.num_states() + q);
  };
  for (State p = 0; p < a.num_states(); ++p)
    for (State q = 0; q < b.num_states(); ++q)
      pb.add_state("(" + a.state_name(p) + "," + b.state_name(q) + ")");
  for (State p : a.initials())
    for (State q : b.initials()) pb.mark_initial(pair_id(p, q));
  for (State p : a.finals())
    for (State q : b.finals()) pb.mark_final(pair_id(p, q));

  // Stack symbols: only pairs actually pushed by some rule pair exist.
  std::map<std::pair<StackSymbol, StackSymbol>, StackSymbol> stack_pairs;
  auto intern_pair = [&](StackSymbol ga, StackSymbol gb) {
    auto [it, fresh] = stack_pairs.try_emplace({ga, gb}, 0);
    if (fresh)
      it->second = pb.add_stack_symbol("(" + a.stack_name(ga) + "," +
                                       b.stack_name(gb) + ")");
    return it->second;
  };
  for (Symbol s : a.alphabet().calls())
    for (const CallRule& ra : a.call_rules_of(s))
      for (const CallRule& rb : b.call_rules_of(s))
        pb.add_call_rule(pair_id(ra.from, rb.from), s,
                         pair_id(ra.to, rb.to), intern_pair(ra.push, rb.push));
  for (Symbol s : a.alphabet().returns())
    for (const ReturnRule& ra : a.return_rules_of(s))
      for (const ReturnRule& rb : b.return_rules_of(s)) {
        if (ra.top == kBottom && rb.top == kBottom) {
          pb.add_return_rule(pair_id(ra.from, rb.from), s, kBottom,
                             pair_id(ra.to, rb.to));
        } else if (ra.top != kBottom && rb.top != kBottom) {
          auto it = stack_pairs.find({ra.top, rb.top});
          if (it != stack_pairs.end())
            pb.add_return_rule(pair_id(ra.from, rb.from), s, it->second,
                               pair_id(ra.to, rb.to));
        }
        // Mixed bottom/non-bottom tops cannot co-occur: both stacks always
        // have the same height.
      }
  for (Symbol s : a.alphabet().internals())
    for (const InternalRule& ra : a.internal_rules_of(s))
      for (const InternalRule& rb : b.internal_rules_of(s))
        pb.add_internal_rule(pair_id(ra.from, rb.from), s,
                             pair_id(ra.to, rb.to));
  return pb.build();
}

Vpa complement_deterministic(const Vpa& m) {
  validate_deterministic(m);
  validate_complete(m);
  VpaBuilder pb(m.alphabet());
  for (State q = 0; q < m.num_states(); ++q) pb.add_state(m.state_name(q));
  for (StackSymbol g = 1; g < m.num_stack_symbols(); ++g)
    pb.add_stack_symbol(m.stack_name(g));
  for (State q : m.initials()) pb.mark_initial(q);
  for (State q = 0; q < m.num_states(); ++q)
    if (!m.is_final(q)) pb.mark_final(q);
  for (const CallRule& r : m.call_rules())
    pb.add_call_rule(r.from, r.symbol, r.to, r.push);
  for (const ReturnRule& r : m.return_rules())
    pb.add_return_rule(r.from, r.symbol, r.top, r.to);
  for (const InternalRule& r : m.internal_rules())
    pb.add_internal_rule(r.from, r.symbol, r.to);
  return pb.build();
}

std::set<Word> enumerate_language(const Vpa& m, std::size_t max_len) {
  std::set<Word> out;
  std::set<Configuration> start;
  for (State q0 : m.initials()) start.insert({q0, {}});
  Word word;
  auto walk = [&](auto&& self, const std::set<Configuration>& configs) -> void {
    for (const Configuration& c : configs)
      if (m.is_final(c.state)) {
        out.insert(word);
        break;
      }
    if (word.size() == max_len) return;
    for (Symbol a = 0; a < m.alphabet().size(); ++a) {
      std::set<Configuration> next;
      for (const Configuration& c : configs)
        for (Configuration& d : step(m, c, a)) next.insert(std::move(d));
      if (next.empty()) continue;
      word.push_back(a);
      self(self, next);
      word.pop_back();
    }
  };
  walk(walk, start);
  return out;
}

void validate_deterministic(const Vpa& m) {
  if (m.initials().size() != 1)
    throw Error("deterministic automaton requires exactly one initial state, "
                "found " +
                std::to_string(m.initials().size()));
  for (State q = 0; q < m.num_states(); ++q) {
    for (Symbol a : m.alphabet().calls())
      if (m.calls_from(q, a).size() > 1)
        throw Error("state '" + m.state_name(q) + "' has " +
                    std::to_string(m.calls_from(q, a).size()) +
                    " call rules on '" + m.alphabet().name(a) + "'");
    for (Symbol a : m.alphabet().internals())
      if (m.internals_from(q, a).size() > 1)
        throw Error("state '" + m.state_name(q) + "' has " +
                    std::to_string(m.internals_from(q, a).size()) +
                    " internal rules on '" + m.alphabet().name(a) + "'");
    for (Symbol a : m.alphabet().returns()) {
      auto span = m.returns_from(q, a);
      for (std::size_t i = 1; i < span.size(); ++i)
        if (span[i].top == span[i - 1].top)
          throw Error("state '" + m.state_name(q) +
                      "' has two return rules on '" + m.alphabet().name(a) +
                      "' with top '" + m.stack_name(span[i].top) + "'");
    }
  }
}

void validate_complete(const Vpa& m) {
  for (State q = 0; q < m.num_states(); ++q) {
    for (Symbol a : m.alphabet().calls())
      if (m.calls_from(q, a).empty())
        throw Error("state '" + m.state_name(q) + "' has no call rule on '" +
                    m.alphabet().name(a) + "'");
    for (Symbol a : m.alphabet().internals())
      if (m.internals_from(q, a).empty())
        throw Error("state '" + m.state_name(q) +
                    "' has no internal rule on '" + m.alphabet().name(a) +
                    "'");
    for (Symbol a : m.alphabet().returns())
      for (StackSymbol g = 0; g < m.num_stack_symbols(); ++g)
        if (m.returns_from(q, a, g).empty())
          throw Error("state '" + m.state_name(q) +
                      "' has no return rule on '" + m.alphabet().name(a) +
                      "' with top '" + m.stack_name(g) + "'");
  }
}

}  // namespace vpa
