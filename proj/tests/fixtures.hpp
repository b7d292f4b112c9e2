#pragma once

#include <string_view>

#include "vpa/automaton.hpp"
#include "vpa/error.hpp"

// Hand-built automata shared across the test suites. All three use the
// alphabet calls {a}, returns {c}, internals {b} and stack alphabet {g}.

namespace fixtures {

inline vpa::PartitionedAlphabet small_alphabet() {
  return vpa::PartitionedAlphabet({"a"}, {"c"}, {"b"});
}

/// One state q0 (initial + final), rules push/pop g on a/c and loop on b.
/// No bottom return rule, so a word is accepted iff every prefix has at
/// least as many a's as c's.
inline vpa::Vpa matched_returns_vpa() {
  vpa::VpaBuilder b(small_alphabet());
  vpa::State q0 = b.add_state("q0");
  vpa::StackSymbol g = b.add_stack_symbol("g");
  b.mark_initial(q0);
  b.mark_final(q0);
  b.add_call_rule(q0, 0, q0, g);      // a pushes g
  b.add_return_rule(q0, 1, g, q0);    // c pops g
  b.add_internal_rule(q0, 2, q0);     // b loops
  return b.build();
}

/// matched_returns_vpa plus a bottom return rule: accepts every word.
inline vpa::Vpa all_words_vpa() {
  vpa::VpaBuilder b(small_alphabet());
  vpa::State q0 = b.add_state("q0");
  vpa::StackSymbol g = b.add_stack_symbol("g");
  b.mark_initial(q0);
  b.mark_final(q0);
  b.add_call_rule(q0, 0, q0, g);
  b.add_return_rule(q0, 1, g, q0);
  b.add_return_rule(q0, 1, vpa::kBottom, q0);  // c on the empty stack
  b.add_internal_rule(q0, 2, q0);
  return b.build();
}

/// matched_returns_vpa with no final states: accepts nothing.
inline vpa::Vpa no_finals_vpa() {
  vpa::VpaBuilder b(small_alphabet());
  vpa::State q0 = b.add_state("q0");
  vpa::StackSymbol g = b.add_stack_symbol("g");
  b.mark_initial(q0);
  b.add_call_rule(q0, 0, q0, g);
  b.add_return_rule(q0, 1, g, q0);
  b.add_internal_rule(q0, 2, q0);
  return b.build();
}

/// Word literal over small_alphabet symbol names, a=0, c=1, b=2:
/// "aacb" -> {0, 0, 1, 2}.
inline vpa::Word word(std::string_view letters) {
  vpa::Word w;
  for (char ch : letters) {
    switch (ch) {
      case 'a': w.push_back(0); break;
      case 'c': w.push_back(1); break;
      case 'b': w.push_back(2); break;
      default: throw vpa::Error("unknown fixture letter");
    }
  }
  return w;
}

}  // namespace fixtures
