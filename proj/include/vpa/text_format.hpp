#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vpa/automaton.hpp"

namespace vpa {

/// Line-oriented automaton format. '#' starts a comment, tokens are
/// whitespace-separated. Declaration sections come first, one per line:
///
///   calls:     a b
///   returns:   c d
///   internals: e f
///   stack:     g1 g2 g3
///   states:    q0 q1
///   initial:   q0
///   final:     q0
///
/// followed by one rule per line:
///
///   call q0 a q1 g1
///   ret  q1 c g1 q0
///   ret  q1 d BOT q1
///   int  q0 e q0
///
/// "BOT" names the implicit bottom-of-stack symbol; it is reserved in the
/// stack section, forbidden as a call push, and allowed as a return top.
/// Errors carry the 1-based line number as a ParseError.
Vpa parse_vpa(std::istream& in);
Vpa parse_vpa(const std::string& text);

/// Canonical rendering; parse_vpa(render_vpa(m)) is structurally equal to m.
std::string render_vpa(const Vpa& m);

/// Maps whitespace-separated symbol names to symbol ids. Throws Error on an
/// unknown name.
Word parse_word(const PartitionedAlphabet& alphabet,
                const std::vector<std::string>& names);

/// Space-separated symbol names; empty string for the empty word.
std::string render_word(const PartitionedAlphabet& alphabet, const Word& w);

}  // namespace vpa
