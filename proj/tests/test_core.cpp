#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracle.hpp"
#include "vpa/automaton.hpp"
#include "vpa/error.hpp"
#include "vpa/randgen.hpp"

using namespace vpa;
using fixtures::word;

// ===== alphabet =====

TEST_CASE("alphabet partitions symbols into contiguous class blocks") {
  PartitionedAlphabet al({"a", "b"}, {"c"}, {"d", "e"});
  CHECK(al.size() == 5);
  CHECK(al.call_count() == 2);
  CHECK(al.return_count() == 1);
  CHECK(al.internal_count() == 2);
  CHECK(al.class_of(0) == SymbolClass::Call);
  CHECK(al.class_of(2) == SymbolClass::Return);
  CHECK(al.class_of(4) == SymbolClass::Internal);
  CHECK(al.find("c") == Symbol{2});
  CHECK(!al.find("z").has_value());
  CHECK(al.calls() == std::vector<Symbol>{0, 1});
  CHECK(al.returns() == std::vector<Symbol>{2});
  CHECK(al.internals() == std::vector<Symbol>{3, 4});
}

TEST_CASE("alphabet rejects duplicate names across classes") {
  CHECK_THROWS_AS(PartitionedAlphabet({"a"}, {"a"}, {}), Error);
  CHECK_THROWS_AS(PartitionedAlphabet({}, {}, {}), Error);
}

// ===== builder =====

TEST_CASE("builder rejects a call rule pushing the bottom marker") {
  VpaBuilder b(fixtures::small_alphabet());
  State q = b.add_state("q0");
  CHECK_THROWS_AS(b.add_call_rule(q, 0, q, kBottom), Error);
}

TEST_CASE("builder rejects rules whose symbol has the wrong class") {
  VpaBuilder b(fixtures::small_alphabet());
  State q = b.add_state("q0");
  StackSymbol g = b.add_stack_symbol("g");
  CHECK_THROWS_AS(b.add_call_rule(q, 1, q, g), Error);     // c is a return
  CHECK_THROWS_AS(b.add_internal_rule(q, 0, q), Error);    // a is a call
  CHECK_THROWS_AS(b.add_return_rule(q, 2, g, q), Error);   // b is internal
  CHECK_THROWS_AS(b.add_internal_rule(q, 99, q), Error);   // not in alphabet
}

TEST_CASE("builder rejects duplicate state and reserved stack names") {
  VpaBuilder b(fixtures::small_alphabet());
  b.add_state("q0");
  CHECK_THROWS_AS(b.add_state("q0"), Error);
  CHECK_THROWS_AS(b.add_stack_symbol("BOT"), Error);
}

// ===== step =====

TEST_CASE("step follows call, return, and internal rules") {
  Vpa m = fixtures::matched_returns_vpa();
  StackSymbol g = *m.find_stack_symbol("g");

  auto push = step(m, {0, {}}, 0);
  REQUIRE(push.size() == 1);
  CHECK(push[0] == Configuration{0, {g}});

  auto pop = step(m, {0, {g, g}}, 1);
  REQUIRE(pop.size() == 1);
  CHECK(pop[0] == Configuration{0, {g}});

  auto loop = step(m, {0, {g}}, 2);
  REQUIRE(loop.size() == 1);
  CHECK(loop[0] == Configuration{0, {g}});
}

TEST_CASE("step on the empty stack uses only bottom return rules") {
  Vpa m1 = fixtures::matched_returns_vpa();
  CHECK(step(m1, {0, {}}, 1).empty());  // no bottom rule: stuck

  Vpa mu = fixtures::all_words_vpa();
  auto out = step(mu, {0, {}}, 1);
  REQUIRE(out.size() == 1);
  CHECK(out[0] == Configuration{0, {}});  // bottom is read, not popped
}

TEST_CASE("step validates the symbol and the configuration") {
  Vpa m = fixtures::matched_returns_vpa();
  CHECK_THROWS_AS(step(m, {0, {}}, 99), Error);
  CHECK_THROWS_AS(step(m, {5, {}}, 0), Error);
  CHECK_THROWS_AS(step(m, {0, {kBottom}}, 0), Error);
}

TEST_CASE("step output matches the reference semantics on all fixtures") {
  for (const Vpa& m : {fixtures::matched_returns_vpa(),
                       fixtures::all_words_vpa(), fixtures::no_finals_vpa()}) {
    StackSymbol g = *m.find_stack_symbol("g");
    for (const Configuration& c :
         {Configuration{0, {}}, Configuration{0, {g}},
          Configuration{0, {g, g}}}) {
      for (Symbol a = 0; a < m.alphabet().size(); ++a) {
        auto got = step(m, c, a);
        auto want = oracle::ostep(m, c, a);
        std::sort(want.begin(), want.end());
        CHECK(got == want);
      }
    }
  }
}

// ===== accepts =====

TEST_CASE("acceptance on the matched-return fixture") {
  Vpa m = fixtures::matched_returns_vpa();
  CHECK(accepts(m, word("")));
  CHECK(accepts(m, word("a")));
  CHECK(accepts(m, word("ab")));
  CHECK(accepts(m, word("aacb")));
  CHECK(accepts(m, word("ac")));
  CHECK_FALSE(accepts(m, word("ca")));   // return before any call
  CHECK_FALSE(accepts(m, word("acc")));
  CHECK(accepts(m, word("aa")));         // pending calls are fine
}

TEST_CASE("acceptance on the all-words and no-finals fixtures") {
  Vpa mu = fixtures::all_words_vpa();
  CHECK(accepts(mu, word("")));
  CHECK(accepts(mu, word("ccc")));
  CHECK(accepts(mu, word("cacb")));

  Vpa m0 = fixtures::no_finals_vpa();
  CHECK_FALSE(accepts(m0, word("")));
  CHECK_FALSE(accepts(m0, word("ab")));
}

TEST_CASE("accepts agrees with the reference semantics on short words") {
  for (const Vpa& m : {fixtures::matched_returns_vpa(),
                       fixtures::all_words_vpa(), fixtures::no_finals_vpa()}) {
    Word w;
    auto walk = [&](auto&& self) -> void {
      CHECK(accepts(m, w) == oracle::oaccepts(m, w));
      if (w.size() == 4) return;
      for (Symbol a = 0; a < m.alphabet().size(); ++a) {
        w.push_back(a);
        self(self);
        w.pop_back();
      }
    };
    walk(walk);
  }
}

// ===== enumerate_language =====

TEST_CASE("language enumeration of the fixtures up to short lengths") {
  Vpa m = fixtures::matched_returns_vpa();
  std::set<Word> len1 = {word(""), word("a"), word("b")};
  CHECK(enumerate_language(m, 1) == len1);

  CHECK(enumerate_language(fixtures::all_words_vpa(), 2).size() == 13);
  CHECK(enumerate_language(fixtures::no_finals_vpa(), 3).empty());
}

TEST_CASE("language enumeration agrees with the reference semantics") {
  for (const Vpa& m : {fixtures::matched_returns_vpa(),
                       fixtures::all_words_vpa(), fixtures::no_finals_vpa()})
    CHECK(enumerate_language(m, 4) == oracle::oenumerate(m, 4));
}

// ===== product =====

TEST_CASE("product accepts exactly the intersection") {
  Vpa m1 = fixtures::matched_returns_vpa();
  Vpa mu = fixtures::all_words_vpa();
  Vpa m0 = fixtures::no_finals_vpa();

  Vpa p11 = product(m1, m1);
  CHECK(accepts(p11, word("ac")));
  CHECK(enumerate_language(p11, 4) == enumerate_language(m1, 4));

  CHECK(enumerate_language(product(m1, m0), 4).empty());
  CHECK(enumerate_language(product(mu, m1), 4) == enumerate_language(m1, 4));
}

TEST_CASE("product requires identical alphabets") {
  Vpa m1 = fixtures::matched_returns_vpa();
  PartitionedAlphabet other({"x"}, {"y"}, {"z"});
  VpaBuilder b(other);
  State q = b.add_state("q0");
  b.mark_initial(q);
  b.mark_final(q);
  Vpa m2 = b.build();
  CHECK_THROWS_AS(product(m1, m2), Error);
}

// ===== complement =====

TEST_CASE("complement requires a deterministic and complete automaton") {
  // matched_returns_vpa is deterministic but incomplete (no bottom return).
  CHECK_THROWS_WITH_AS(complement_deterministic(fixtures::matched_returns_vpa()),
                       doctest::Contains("no return rule"), Error);

  VpaBuilder b(fixtures::small_alphabet());
  State q = b.add_state("q0");
  StackSymbol g = b.add_stack_symbol("g");
  b.mark_initial(q);
  b.add_call_rule(q, 0, q, g);
  StackSymbol h = b.add_stack_symbol("h");
  b.add_call_rule(q, 0, q, h);  // two call rules on one slot
  Vpa nondet = b.build();
  CHECK_THROWS_WITH_AS(validate_deterministic(nondet),
                       doctest::Contains("2 call rules"), Error);
}

TEST_CASE("complement of the all-words fixture accepts nothing") {
  Vpa mu = fixtures::all_words_vpa();
  Vpa comp = complement_deterministic(mu);
  CHECK(enumerate_language(comp, 4).empty());
  Vpa back = complement_deterministic(comp);
  CHECK(enumerate_language(back, 4) == enumerate_language(mu, 4));
}

// ===== structural equality =====

TEST_CASE("structural equality distinguishes final-state sets") {
  CHECK(fixtures::matched_returns_vpa() == fixtures::matched_returns_vpa());
  CHECK_FALSE(fixtures::matched_returns_vpa() == fixtures::no_finals_vpa());
  CHECK_FALSE(fixtures::matched_returns_vpa() == fixtures::all_words_vpa());
}

// ===== random instances =====

TEST_CASE("library semantics agree with the reference on random models") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    for (const Vpa& m : {generate_random1(3, seed),
                         generate_random2(3, 0.5, seed)}) {
      CHECK(enumerate_language(m, 3) == oracle::oenumerate(m, 3));
      Word w;
      auto walk = [&](auto&& self) -> void {
        CHECK(accepts(m, w) == oracle::oaccepts(m, w));
        if (w.size() == 3) return;
        for (Symbol a = 0; a < m.alphabet().size(); ++a) {
          w.push_back(a);
          self(self);
          w.pop_back();
        }
      };
      walk(walk);
    }
  }
}

TEST_CASE("product acceptance is conjunction on random models") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    Vpa a = generate_random1(3, seed);
    Vpa b = generate_random2(3, 0.5, seed + 100);
    Vpa p = product(a, b);
    for (const Word& w : enumerate_language(a, 3))
      CHECK(accepts(p, w) == accepts(b, w));
    CHECK(enumerate_language(p, 3) ==
          oracle::ointersect(oracle::oenumerate(a, 3),
                             oracle::oenumerate(b, 3)));
  }
}
