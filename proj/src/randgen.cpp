#include "vpa/randgen.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "vpa/bits.hpp"
#include "vpa/error.hpp"

namespace vpa {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  if (bound == 0) throw Error("empty draw range");
  std::uint64_t limit = ~0ULL - ~0ULL % bound;
  std::uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return v % bound;
}

SplitMix64 derive_stream(std::uint64_t seed,
                         std::initializer_list<std::uint64_t> tags) {
  std::uint64_t s = detail::hash_mix(seed ^ 0xA0761D6478BD642FULL);
  std::uint64_t i = 1;
  for (std::uint64_t t : tags)
    s = detail::hash_mix(s ^ (t + 0x9E3779B97F4A7C15ULL * i++));
  return SplitMix64(s);
}

std::vector<std::uint64_t> sample_indices(SplitMix64& rng, std::uint64_t n,
                                          std::uint64_t k) {
  if (k > n) throw Error("cannot sample more indices than the range holds");
  std::unordered_set<std::uint64_t> chosen;
  for (std::uint64_t j = n - k; j < n; ++j) {
    std::uint64_t t = rng.below(j + 1);
    chosen.insert(chosen.count(t) ? j : t);
  }
  std::vector<std::uint64_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Stream tags: {0} initial state, {2} final states, {1, symbol} or
// {1, symbol, state} transition samples.
constexpr std::uint64_t kInitialTag = 0;
constexpr std::uint64_t kRuleTag = 1;
constexpr std::uint64_t kFinalTag = 2;

PartitionedAlphabet model_alphabet() {
  return PartitionedAlphabet({"a", "b"}, {"c", "d"}, {"e", "f"});
}

VpaBuilder model_builder(const PartitionedAlphabet& alphabet,
                         std::uint32_t n) {
  VpaBuilder b(alphabet);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::ostringstream name;
    name << 'q' << i;
    b.add_state(name.str());
  }
  b.add_stack_symbol("g1");
  b.add_stack_symbol("g2");
  b.add_stack_symbol("g3");
  return b;
}

constexpr std::uint64_t kPushChoices = 3;  // g1, g2, g3
constexpr std::uint64_t kTopChoices = 4;   // bottom, g1, g2, g3

}  // namespace

Vpa generate_random1(std::uint32_t num_states, std::uint64_t seed) {
  if (num_states < 2) throw Error("random1 requires at least 2 states");
  const std::uint64_t n = num_states;
  PartitionedAlphabet alphabet = model_alphabet();
  VpaBuilder b = model_builder(alphabet, num_states);
  const std::uint64_t per_symbol = 2 * n;

  for (Symbol a : alphabet.calls()) {
    SplitMix64 rng = derive_stream(seed, {kRuleTag, a});
    for (std::uint64_t idx :
         sample_indices(rng, n * n * kPushChoices, per_symbol)) {
      State from = static_cast<State>(idx / (n * kPushChoices));
      std::uint64_t rem = idx % (n * kPushChoices);
      b.add_call_rule(from, a, static_cast<State>(rem / kPushChoices),
                      static_cast<StackSymbol>(1 + rem % kPushChoices));
    }
  }
  for (Symbol a : alphabet.returns()) {
    SplitMix64 rng = derive_stream(seed, {kRuleTag, a});
    for (std::uint64_t idx :
         sample_indices(rng, n * kTopChoices * n, per_symbol)) {
      State from = static_cast<State>(idx / (kTopChoices * n));
      std::uint64_t rem = idx % (kTopChoices * n);
      b.add_return_rule(from, a, static_cast<StackSymbol>(rem / n),
                        static_cast<State>(rem % n));
    }
  }
  for (Symbol a : alphabet.internals()) {
    SplitMix64 rng = derive_stream(seed, {kRuleTag, a});
    for (std::uint64_t idx : sample_indices(rng, n * n, per_symbol))
      b.add_internal_rule(static_cast<State>(idx / n), a,
                          static_cast<State>(idx % n));
  }

  b.mark_initial(
      static_cast<State>(derive_stream(seed, {kInitialTag}).below(n)));
  for (std::uint32_t q = 0; q < num_states; ++q) b.mark_final(q);
  return b.build();
}

Vpa generate_random2(std::uint32_t num_states, double final_fraction,
                     std::uint64_t seed) {
  if (num_states < 2) throw Error("random2 requires at least 2 states");
  if (!(final_fraction >= 0.0 && final_fraction <= 1.0))
    throw Error("final state fraction must lie in [0, 1]");
  const std::uint64_t n = num_states;
  PartitionedAlphabet alphabet = model_alphabet();
  VpaBuilder b = model_builder(alphabet, num_states);

  for (State q = 0; q < num_states; ++q) {
    for (Symbol a : alphabet.calls()) {
      SplitMix64 rng = derive_stream(seed, {kRuleTag, a, q});
      for (std::uint64_t idx : sample_indices(rng, n * kPushChoices, 2))
        b.add_call_rule(q, a, static_cast<State>(idx / kPushChoices),
                        static_cast<StackSymbol>(1 + idx % kPushChoices));
    }
    for (Symbol a : alphabet.returns()) {
      SplitMix64 rng = derive_stream(seed, {kRuleTag, a, q});
      for (std::uint64_t idx : sample_indices(rng, kTopChoices * n, 6))
        b.add_return_rule(q, a, static_cast<StackSymbol>(idx / n),
                          static_cast<State>(idx % n));
    }
    for (Symbol a : alphabet.internals()) {
      SplitMix64 rng = derive_stream(seed, {kRuleTag, a, q});
      for (std::uint64_t idx : sample_indices(rng, n, 2))
        b.add_internal_rule(q, a, static_cast<State>(idx));
    }
  }

  b.mark_initial(
      static_cast<State>(derive_stream(seed, {kInitialTag}).below(n)));
  auto finals = static_cast<std::uint64_t>(
      std::ceil(final_fraction * static_cast<double>(n)));
  finals = std::min(finals, n);
  SplitMix64 rng = derive_stream(seed, {kFinalTag});
  for (std::uint64_t q : sample_indices(rng, n, finals))
    b.mark_final(static_cast<State>(q));
  return b.build();
}

}  // namespace vpa
