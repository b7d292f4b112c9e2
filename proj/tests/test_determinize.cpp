#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracle.hpp"
#include "vpa/determinize.hpp"
#include "vpa/error.hpp"
#include "vpa/randgen.hpp"

using namespace vpa;
using fixtures::word;

namespace {

DeterminizeOptions options(DetMode mode, PopScope scope) {
  DeterminizeOptions o;
  o.mode = mode;
  o.pop_scope = scope;
  return o;
}

}  // namespace

TEST_CASE("relation index mirrors the rule lists") {
  Vpa m = fixtures::matched_returns_vpa();
  RelationIndex rels(m);
  StackSymbol g = 1;
  CHECK(rels.call_rel(0, g).test(0, 0));
  CHECK(rels.call_any(0).test(0, 0));
  CHECK(rels.return_rel(1, g).test(0, 0));
  CHECK(rels.return_rel(1, kBottom).empty());
  CHECK(rels.internal_rel(2).test(0, 0));
}

TEST_CASE("successor algebra on the matched-return fixture") {
  Vpa m = fixtures::matched_returns_vpa();
  RelationIndex rels(m);
  DState d0 = initial_dstate(m, DetMode::Optimized);
  CHECK(d0.summary.pair_count() == 1);
  CHECK(d0.summary.test(0, 0));

  CHECK(internal_successor(d0, rels, 2, DetMode::Optimized) == d0);
  CHECK(call_successor(d0, rels, 0, DetMode::Optimized) == d0);
  CHECK(pop_successor(d0, 0, d0, rels, 1, DetMode::Optimized) == d0);

  DState sink = bottom_return_successor(d0, rels, 1, DetMode::Optimized);
  CHECK(sink.summary.empty());
  CHECK_FALSE(is_final_dstate(sink, m.final_bits(), DetMode::Optimized));
  CHECK(is_final_dstate(d0, m.final_bits(), DetMode::Optimized));

  // The empty summary absorbs every operation.
  CHECK(internal_successor(sink, rels, 2, DetMode::Optimized) == sink);
  CHECK(call_successor(sink, rels, 0, DetMode::Optimized) == sink);
  CHECK(pop_successor(d0, 0, sink, rels, 1, DetMode::Optimized) == sink);
}

TEST_CASE("complete determinization of the matched-return fixture") {
  Vpa m = fixtures::matched_returns_vpa();
  DeterminizedVpa det =
      determinize(m, options(DetMode::Optimized, PopScope::AllGenerated));
  CHECK(det.stats.num_dstates == 2);
  CHECK(det.stats.num_stack_symbols == 2);
  CHECK(det.stats.num_transitions == 10);  // 2 calls, 2 internals, 6 returns
  CHECK(det.automaton.state_name(0) == "{(q0,q0)}");
  CHECK(det.automaton.state_name(1) == "{}");
  CHECK(det.automaton.stack_name(1) == "({(q0,q0)},a)");
  CHECK(det.automaton.stack_name(2) == "({},a)");
  CHECK(det.automaton.finals() == std::vector<State>{0});
  CHECK(det.stack_origins ==
        std::vector<std::pair<State, Symbol>>{{0, 0}, {1, 0}});
  CHECK_NOTHROW(validate_deterministic(det.automaton));
  CHECK_NOTHROW(validate_complete(det.automaton));
  CHECK(enumerate_language(det.automaton, 5) == enumerate_language(m, 5));
}

TEST_CASE("reachable-facts determinization of the matched-return fixture") {
  Vpa m = fixtures::matched_returns_vpa();
  DeterminizedVpa det =
      determinize(m, options(DetMode::Optimized, PopScope::ReachableFacts));
  CHECK(det.stats.num_dstates == 2);
  CHECK(det.stats.num_stack_symbols == 2);
  // Only the co-occurring pops: (accepting state, its own frame) and
  // (sink, sink frame). 2 calls + 2 internals + 2 bottom + 2 pops.
  CHECK(det.stats.num_transitions == 8);
  CHECK(det.stats.saturation_facts > 0);
  CHECK_NOTHROW(validate_deterministic(det.automaton));
  CHECK_THROWS_AS(validate_complete(det.automaton), Error);
  CHECK(enumerate_language(det.automaton, 5) == enumerate_language(m, 5));
}

TEST_CASE("the all-words fixture collapses to one universal d-state") {
  Vpa m = fixtures::all_words_vpa();
  DeterminizedVpa det =
      determinize(m, options(DetMode::Optimized, PopScope::AllGenerated));
  CHECK(det.stats.num_dstates == 1);
  CHECK(det.stats.num_stack_symbols == 1);
  CHECK(det.stats.num_transitions == 4);
  CHECK(det.automaton.finals().size() == 1);
  CHECK(enumerate_language(det.automaton, 3).size() == 40);  // 1+3+9+27
}

TEST_CASE("no final states survive determinizing the empty fixture") {
  DeterminizedVpa det = determinize(
      fixtures::no_finals_vpa(), options(DetMode::Optimized, PopScope::AllGenerated));
  CHECK(det.automaton.finals().empty());
  CHECK(enumerate_language(det.automaton, 4).empty());
}

TEST_CASE("summary range equals the tracked reach set in intermediate mode") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    Vpa m = seed % 2 == 0 ? generate_random1(3, seed)
                          : generate_random2(3, 0.5, seed);
    for (PopScope scope : {PopScope::AllGenerated, PopScope::ReachableFacts}) {
      DeterminizedVpa det =
          determinize(m, options(DetMode::Intermediate, scope));
      for (const DState& d : det.dstates)
        CHECK(d.summary.range() == d.reach);
    }
  }
}

TEST_CASE("intermediate and optimized determinizations align state by state") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    Vpa m = generate_random2(3, 0.4, seed);
    DeterminizedVpa opt =
        determinize(m, options(DetMode::Optimized, PopScope::AllGenerated));
    DeterminizedVpa mid =
        determinize(m, options(DetMode::Intermediate, PopScope::AllGenerated));
    REQUIRE(opt.stats.num_dstates == mid.stats.num_dstates);
    CHECK(opt.stack_origins == mid.stack_origins);
    for (std::size_t i = 0; i < opt.dstates.size(); ++i)
      CHECK(opt.dstates[i].summary == mid.dstates[i].summary);
  }
}

TEST_CASE("all modes and scopes preserve the language") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    for (const Vpa& m :
         {generate_random1(2, seed), generate_random2(3, 0.5, seed)}) {
      auto want = oracle::oenumerate(m, 4);
      for (DetMode mode :
           {DetMode::Optimized, DetMode::Intermediate, DetMode::Original}) {
        DeterminizedVpa det =
            determinize(m, options(mode, PopScope::AllGenerated));
        CHECK(enumerate_language(det.automaton, 4) == want);
        CHECK_NOTHROW(validate_deterministic(det.automaton));
        CHECK_NOTHROW(validate_complete(det.automaton));
      }
      DeterminizedVpa rf =
          determinize(m, options(DetMode::Optimized, PopScope::ReachableFacts));
      CHECK(enumerate_language(rf.automaton, 4) == want);
      CHECK_NOTHROW(validate_deterministic(rf.automaton));
    }
  }
}

TEST_CASE("state counts respect the mode bounds") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    std::uint32_t n = 2;
    Vpa m = generate_random2(n, 0.5, seed);
    auto opt =
        determinize(m, options(DetMode::Optimized, PopScope::AllGenerated));
    auto orig =
        determinize(m, options(DetMode::Original, PopScope::AllGenerated));
    CHECK(opt.stats.num_dstates <= 1u << (n * n));
    CHECK(orig.stats.num_dstates <= 1u << (n * n + n));
    CHECK(opt.stats.num_dstates <= orig.stats.num_dstates);
  }
}

TEST_CASE("complementing a complete determinization flips acceptance") {
  Vpa m = fixtures::matched_returns_vpa();
  DeterminizedVpa det =
      determinize(m, options(DetMode::Optimized, PopScope::AllGenerated));
  Vpa comp = complement_deterministic(det.automaton);
  CHECK(accepts(comp, word("ca")));
  CHECK(accepts(comp, word("acc")));
  CHECK_FALSE(accepts(comp, word("aacb")));
  auto everything = enumerate_language(fixtures::all_words_vpa(), 4);
  auto original = enumerate_language(m, 4);
  auto complemented = enumerate_language(comp, 4);
  for (const Word& w : everything)
    CHECK(original.count(w) + complemented.count(w) == 1);
}

TEST_CASE("a step budget interrupts determinization") {
  Vpa m = generate_random2(6, 0.5, 1);
  Budget budget;
  budget.set_max_steps(10);
  CHECK_THROWS_AS(
      determinize(m, options(DetMode::Optimized, PopScope::AllGenerated),
                  budget),
      BudgetExceeded);
}

TEST_CASE("large inputs fall back to mechanical state names") {
  VpaBuilder b(fixtures::small_alphabet());
  for (int i = 0; i < 13; ++i) b.add_state("q" + std::to_string(i));
  StackSymbol g = b.add_stack_symbol("g");
  b.mark_initial(0);
  b.mark_final(0);
  b.add_call_rule(0, 0, 0, g);
  b.add_return_rule(0, 1, g, 0);
  b.add_internal_rule(0, 2, 0);
  Vpa m = b.build();
  DeterminizedVpa det =
      determinize(m, options(DetMode::Optimized, PopScope::ReachableFacts));
  CHECK(det.automaton.state_name(0) == "d0");
  CHECK(det.automaton.stack_name(1) == "s1");
}
