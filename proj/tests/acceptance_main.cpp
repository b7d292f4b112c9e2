// Acceptance suite. Each criterion prints one PASS/FAIL line; the process
// exits 0 only when every criterion passes. Corpora are seeded and fixed, so
// everything except the reported times is deterministic.

#include <chrono>
#include <cstdint>
#include <deque>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "vpa/automaton.hpp"
#include "vpa/bench.hpp"
#include "vpa/budget.hpp"
#include "vpa/decide.hpp"
#include "vpa/determinize.hpp"
#include "vpa/preach.hpp"
#include "vpa/randgen.hpp"

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, bool ok, const std::string& what) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << what
            << std::endl;
  if (!ok) ++failures;
}

double elapsed_s(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_s(double s) {
  std::ostringstream out;
  out.precision(1);
  out << std::fixed << s << " s";
  return out.str();
}

// Reachable-only determinization, the library default. The rail guards the
// suite against a runaway instance; it is far above anything n <= 4 needs.
vpa::DeterminizedVpa det(const vpa::Vpa& m, vpa::DetMode mode) {
  vpa::Budget budget;
  budget.set_max_steps(20'000'000);
  return vpa::determinize(m, {mode, vpa::PopScope::ReachableFacts}, budget);
}

// Some word of length <= max_len rejected by m, if one exists. Walks the
// word tree with rule-scan config sets, so it is independent of the library
// step and of both decision procedures.
std::optional<vpa::Word> oracle_universality_cex(const vpa::Vpa& m,
                                                 std::size_t max_len) {
  struct Node {
    vpa::Word word;
    std::set<vpa::Configuration> configs;
  };
  std::deque<Node> queue;
  std::set<vpa::Configuration> start;
  for (vpa::State q : m.initials()) start.insert({q, {}});
  queue.push_back({{}, std::move(start)});
  while (!queue.empty()) {
    Node n = std::move(queue.front());
    queue.pop_front();
    bool accepted = false;
    for (const vpa::Configuration& c : n.configs)
      if (m.is_final(c.state)) accepted = true;
    if (!accepted) return n.word;
    if (n.word.size() == max_len) continue;
    for (vpa::Symbol a = 0; a < m.alphabet().size(); ++a) {
      Node next{n.word, {}};
      next.word.push_back(a);
      for (const vpa::Configuration& c : n.configs)
        for (vpa::Configuration& d : oracle::ostep(m, c, a))
          next.configs.insert(std::move(d));
      queue.push_back(std::move(next));
    }
  }
  return std::nullopt;
}

// Some word of length <= max_len accepted by a but not by b, if one exists.
std::optional<vpa::Word> oracle_inclusion_cex(const vpa::Vpa& a,
                                              const vpa::Vpa& b,
                                              std::size_t max_len) {
  struct Node {
    vpa::Word word;
    std::set<vpa::Configuration> ca;
    std::set<vpa::Configuration> cb;
  };
  std::deque<Node> queue;
  Node root;
  for (vpa::State q : a.initials()) root.ca.insert({q, {}});
  for (vpa::State q : b.initials()) root.cb.insert({q, {}});
  queue.push_back(std::move(root));
  while (!queue.empty()) {
    Node n = std::move(queue.front());
    queue.pop_front();
    bool in_a = false;
    for (const vpa::Configuration& c : n.ca)
      if (a.is_final(c.state)) in_a = true;
    bool in_b = false;
    for (const vpa::Configuration& c : n.cb)
      if (b.is_final(c.state)) in_b = true;
    if (in_a && !in_b) return n.word;
    if (n.word.size() == max_len) continue;
    for (vpa::Symbol x = 0; x < a.alphabet().size(); ++x) {
      Node next{n.word, {}, {}};
      next.word.push_back(x);
      for (const vpa::Configuration& c : n.ca)
        for (vpa::Configuration& d : oracle::ostep(a, c, x))
          next.ca.insert(std::move(d));
      for (const vpa::Configuration& c : n.cb)
        for (vpa::Configuration& d : oracle::ostep(b, c, x))
          next.cb.insert(std::move(d));
      if (next.ca.empty()) continue;  // no a-word extends this prefix
      queue.push_back(std::move(next));
    }
  }
  return std::nullopt;
}

// Criteria 1-3 share one corpus pass: 204 seeded sparse instances with
// n in {2,3,4}.
void criteria_123() {
  auto t0 = Clock::now();
  std::size_t instances = 0;
  std::size_t lemma_states = 0;
  bool c1 = true, c2 = true, c3 = true;
  std::string c1_why, c2_why, c3_why;
  for (std::uint32_t n = 2; n <= 4; ++n) {
    for (std::uint64_t seed = 0; seed < 68; ++seed) {
      vpa::Vpa m = vpa::generate_random1(n, 1000 * n + seed);
      ++instances;
      std::optional<vpa::DeterminizedVpa> opt, mid, orig;
      try {
        opt = det(m, vpa::DetMode::Optimized);
        mid = det(m, vpa::DetMode::Intermediate);
        orig = det(m, vpa::DetMode::Original);
      } catch (const vpa::BudgetExceeded&) {
        std::ostringstream out;
        out << "determinization rail tripped at n=" << n
            << " seed=" << 1000 * n + seed;
        c1 = c2 = c3 = false;
        c1_why = c2_why = c3_why = out.str();
        break;
      }

      std::set<vpa::Word> want = vpa::enumerate_language(m, 6);
      auto tag = [&](const char* what) {
        std::ostringstream out;
        out << what << " at n=" << n << " seed=" << (1000 * n + seed);
        return out.str();
      };
      if (c1 && want != oracle::oenumerate(m, 6)) {
        c1 = false;
        c1_why = tag("enumeration disagrees with the rule-scan interpreter");
      }
      if (c1 && vpa::enumerate_language(opt->automaton, 6) != want) {
        c1 = false;
        c1_why = tag("optimized mode changes the language");
      }
      if (c1 && vpa::enumerate_language(mid->automaton, 6) != want) {
        c1 = false;
        c1_why = tag("intermediate mode changes the language");
      }
      if (c1 && vpa::enumerate_language(orig->automaton, 6) != want) {
        c1 = false;
        c1_why = tag("original mode changes the language");
      }

      for (const vpa::DState& d : mid->dstates) {
        ++lemma_states;
        if (c2 && !(d.summary.range() == d.reach)) {
          c2 = false;
          c2_why = tag("reach component differs from summary range");
        }
      }

      std::uint64_t opt_bound = 1ull << (n * n);
      std::uint64_t orig_bound = 1ull << (n * n + n);
      if (c3 && opt->stats.num_dstates > opt_bound) {
        c3 = false;
        c3_why = tag("optimized count exceeds 2^(n^2)");
      }
      if (c3 && opt->stats.num_dstates > orig->stats.num_dstates) {
        c3 = false;
        c3_why = tag("optimized count exceeds original count");
      }
      if (c3 && orig->stats.num_dstates > orig_bound) {
        c3 = false;
        c3_why = tag("original count exceeds 2^(n^2+n)");
      }
    }
  }
  double secs = elapsed_s(t0);
  bool in_time = secs < 120.0;
  std::ostringstream d1;
  d1 << "language up to length 6 preserved by all three modes on "
     << instances << " instances, " << fmt_s(secs);
  report(1, c1 && in_time, c1 ? (in_time ? d1.str() : "over 2 minutes: " + fmt_s(secs)) : c1_why);
  std::ostringstream d2;
  d2 << "reach component equals summary range on " << lemma_states
     << " intermediate d-states";
  report(2, c2, c2 ? d2.str() : c2_why);
  std::ostringstream d3;
  d3 << "optimized <= 2^(n^2) and optimized <= original <= 2^(n^2+n) on "
     << instances << " instances";
  report(3, c3, c3 ? d3.str() : c3_why);
}

// Criterion 4: saturated configuration sets match bounded forward search.
void criterion4() {
  auto t0 = Clock::now();
  std::size_t instances = 0;
  bool ok = true;
  std::string why;
  for (std::uint32_t n = 2; n <= 4 && ok; ++n) {
    for (std::uint64_t seed = 0; seed < 17 && ok; ++seed) {
      for (int gen = 1; gen <= 2 && ok; ++gen) {
        vpa::Vpa m = gen == 1 ? vpa::generate_random1(n, 2000 + seed)
                              : vpa::generate_random2(n, 0.5, 2000 + seed);
        ++instances;
        vpa::Budget budget;
        vpa::PAutomaton pa = vpa::saturate(m, budget);
        std::set<vpa::Configuration> got = vpa::recognized_configurations(pa, 4);
        // Low configurations can need a taller excursion; retry deeper
        // before trusting a mismatch.
        bool match = false;
        for (std::size_t explore : {8u, 10u, 12u})
          if (got == oracle::oreachable(m, 4, explore)) {
            match = true;
            break;
          }
        if (!match) {
          ok = false;
          std::ostringstream out;
          out << "mismatch at n=" << n << " model=" << gen
              << " seed=" << 2000 + seed;
          why = out.str();
        }
      }
    }
  }
  double secs = elapsed_s(t0);
  bool in_time = secs < 120.0;
  std::ostringstream d;
  d << "configurations of height <= 4 match forward search on " << instances
    << " instances, " << fmt_s(secs);
  report(4, ok && in_time, ok ? (in_time ? d.str() : "over 2 minutes: " + fmt_s(secs)) : why);
}

struct DecisionCorpusResult {
  bool dominance = true;
  std::size_t nonuniversal = 0;
  std::string dominance_why;
};

// Criterion 5 (agreement and oracle consistency) plus the data for
// criterion 8 (d-state dominance on non-universal instances).
DecisionCorpusResult criterion5() {
  auto t0 = Clock::now();
  DecisionCorpusResult r;
  bool agree = true, consistent = true;
  std::size_t uni_count = 0, inc_count = 0;
  std::string why;
  vpa::DecisionOptions opts;
  opts.timeout = std::chrono::milliseconds(30000);

  auto tag = [&](const char* what, const std::string& inst) {
    return std::string(what) + " on " + inst;
  };

  for (std::uint32_t n = 2; n <= 3; ++n) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      for (int gen = 1; gen <= 2; ++gen) {
        vpa::Vpa m = gen == 1 ? vpa::generate_random1(n, 3000 + seed)
                              : vpa::generate_random2(n, 0.5, 3000 + seed);
        ++uni_count;
        std::ostringstream inst;
        inst << "universality n=" << n << " model=" << gen
             << " seed=" << 3000 + seed;
        vpa::Verdict fly = vpa::universality_on_the_fly(m, opts);
        vpa::Verdict std_ = vpa::universality_standard(m, opts);
        if (agree && fly.outcome != std_.outcome) {
          agree = false;
          why = tag("methods disagree", inst.str());
        }
        if (fly.outcome == vpa::Outcome::Fails) {
          ++r.nonuniversal;
          if (r.dominance && fly.stats.d_states > std_.stats.d_states) {
            r.dominance = false;
            r.dominance_why = tag("on-the-fly built more d-states", inst.str());
          }
          if (consistent && fly.witness &&
              oracle::oaccepts(m, *fly.witness)) {
            consistent = false;
            why = tag("witness is accepted", inst.str());
          }
        }
        auto cex = oracle_universality_cex(m, 6);
        if (consistent && cex &&
            (fly.outcome != vpa::Outcome::Fails ||
             std_.outcome != vpa::Outcome::Fails)) {
          consistent = false;
          why = tag("oracle counterexample but verdict holds", inst.str());
        }
      }
    }
  }

  auto check_pair = [&](const vpa::Vpa& a, const vpa::Vpa& b,
                        const std::string& inst) {
    ++inc_count;
    vpa::Verdict fly = vpa::inclusion_on_the_fly(a, b, opts);
    vpa::Verdict std_ = vpa::inclusion_standard(a, b, opts);
    if (agree && fly.outcome != std_.outcome) {
      agree = false;
      why = tag("methods disagree", inst);
    }
    if (consistent && fly.outcome == vpa::Outcome::Fails && fly.witness &&
        !(oracle::oaccepts(a, *fly.witness) &&
          !oracle::oaccepts(b, *fly.witness))) {
      consistent = false;
      why = tag("witness does not separate the pair", inst);
    }
    auto cex = oracle_inclusion_cex(a, b, 6);
    if (consistent && cex &&
        (fly.outcome != vpa::Outcome::Fails ||
         std_.outcome != vpa::Outcome::Fails)) {
      consistent = false;
      why = tag("oracle counterexample but verdict holds", inst);
    }
  };

  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    std::ostringstream inst;
    inst << "inclusion model=2 seed=" << 4000 + seed;
    check_pair(vpa::generate_random2(3, 0.4, 4000 + seed),
               vpa::generate_random2(3, 0.6, 5000 + seed), inst.str());
  }
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    std::ostringstream inst;
    inst << "inclusion model=1 seed=" << 6000 + seed;
    check_pair(vpa::generate_random1(3, 6000 + seed),
               vpa::generate_random1(3, 6500 + seed), inst.str());
  }
  check_pair(fixtures::matched_returns_vpa(), fixtures::all_words_vpa(),
             "inclusion matched-returns vs all-words");
  check_pair(fixtures::all_words_vpa(), fixtures::matched_returns_vpa(),
             "inclusion all-words vs matched-returns");
  check_pair(fixtures::matched_returns_vpa(), fixtures::no_finals_vpa(),
             "inclusion matched-returns vs no-finals");
  check_pair(fixtures::no_finals_vpa(), fixtures::matched_returns_vpa(),
             "inclusion no-finals vs matched-returns");

  bool ok = agree && consistent;
  std::ostringstream d;
  d << "on-the-fly and standard agree on " << uni_count
    << " universality instances and " << inc_count
    << " inclusion pairs, witnesses and length-6 oracle consistent, "
    << fmt_s(elapsed_s(t0));
  report(5, ok, ok ? d.str() : why);
  return r;
}

// Criterion 6: frozen fixture verdicts, both methods.
void criterion6() {
  vpa::Vpa matched = fixtures::matched_returns_vpa();
  vpa::Vpa all = fixtures::all_words_vpa();
  bool ok = true;
  std::string why;
  auto need = [&](bool cond, const char* what) {
    if (ok && !cond) {
      ok = false;
      why = what;
    }
  };
  need(vpa::universality_on_the_fly(matched).outcome == vpa::Outcome::Fails,
       "matched-returns reported universal (on-the-fly)");
  need(vpa::universality_standard(matched).outcome == vpa::Outcome::Fails,
       "matched-returns reported universal (standard)");
  need(vpa::universality_on_the_fly(all).outcome == vpa::Outcome::Holds,
       "all-words reported non-universal (on-the-fly)");
  need(vpa::universality_standard(all).outcome == vpa::Outcome::Holds,
       "all-words reported non-universal (standard)");
  need(vpa::inclusion_on_the_fly(matched, all).outcome == vpa::Outcome::Holds,
       "matched-returns <= all-words rejected (on-the-fly)");
  need(vpa::inclusion_standard(matched, all).outcome == vpa::Outcome::Holds,
       "matched-returns <= all-words rejected (standard)");
  for (auto* decide : {&vpa::inclusion_on_the_fly, &vpa::inclusion_standard}) {
    vpa::Verdict v = (*decide)(all, matched, {});
    need(v.outcome == vpa::Outcome::Fails,
         "all-words <= matched-returns accepted");
    need(v.witness == fixtures::word("c"), "witness is not \"c\"");
    if (v.witness) {
      need(vpa::accepts(all, *v.witness), "witness rejected by all-words");
      need(!vpa::accepts(matched, *v.witness),
           "witness accepted by matched-returns");
    }
  }
  report(6, ok,
         ok ? "fixture verdicts and the validated witness \"c\" as frozen"
            : why);
}

// Criterion 7: the benchmark trend. The per-instance step cap keeps the
// exhaustive standard runs inside the container's memory; hitting it counts
// as a timeout, which is the same classification the deadline gives.
void criterion7() {
  auto t0 = Clock::now();
  vpa::BenchTask task;
  task.problem = vpa::BenchProblem::Universality;
  task.method = vpa::BenchMethod::OnTheFly;
  task.model = 1;
  task.sizes = {{10, 0}, {20, 0}, {30, 0}, {40, 0}, {50, 0}};
  task.samples = 20;
  task.timeout = std::chrono::milliseconds(60000);
  task.seed_base = 1;
  task.max_steps = 45'000'000;
  std::vector<vpa::BenchRow> fly = vpa::run_bench(task);

  task.method = vpa::BenchMethod::Standard;
  task.sizes = {{10, 0}};
  std::vector<vpa::BenchRow> std_ = vpa::run_bench(task);

  bool ok = true;
  std::ostringstream d;
  d << "on-the-fly solved";
  for (const vpa::BenchRow& row : fly) {
    ok = ok && row.successes >= 18;  // >= 90% of 20
    d << ' ' << row.successes << "/20 at n=" << row.size;
  }
  ok = ok && std_.size() == 1 && std_[0].successes <= 2;  // <= 10% of 20
  d << "; standard solved " << (std_.empty() ? 0 : std_[0].successes)
    << "/20 at n=10";
  double secs = elapsed_s(t0);
  d << ", " << fmt_s(secs);
  report(7, ok && secs < 3600.0, d.str());
}

}  // namespace

int main() {
  auto t0 = Clock::now();
  try {
    criteria_123();
    criterion4();
    DecisionCorpusResult corpus = criterion5();
    criterion6();
    criterion7();
    std::ostringstream d8;
    d8 << "on-the-fly d-states <= standard d-states on " << corpus.nonuniversal
       << " non-universal instances";
    report(8, corpus.dominance,
           corpus.dominance ? d8.str() : corpus.dominance_why);
  } catch (const std::exception& e) {
    std::cout << "FAIL suite aborted: " << e.what() << std::endl;
    return 1;
  } catch (...) {
    std::cout << "FAIL suite aborted by a non-standard exception" << std::endl;
    return 1;
  }
  std::cout << (failures == 0 ? "all criteria passed"
                              : std::to_string(failures) + " criteria failed")
            << " in " << fmt_s(elapsed_s(t0)) << std::endl;
  return failures == 0 ? 0 : 1;
}
