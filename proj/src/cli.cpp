#include "vpa/cli.hpp"

#include <chrono>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vpa/automaton.hpp"
#include "vpa/bench.hpp"
#include "vpa/budget.hpp"
#include "vpa/decide.hpp"
#include "vpa/determinize.hpp"
#include "vpa/error.hpp"
#include "vpa/preach.hpp"
#include "vpa/randgen.hpp"
#include "vpa/text_format.hpp"

namespace vpa {

namespace {

constexpr int kHolds = 0;
constexpr int kFails = 1;
constexpr int kUsage = 2;
constexpr int kTimeout = 3;

Vpa load_vpa(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return parse_vpa(in);
}

Budget make_budget(std::uint64_t timeout_ms, std::uint64_t max_steps) {
  Budget b;
  if (timeout_ms)
    b.set_deadline(std::chrono::steady_clock::now() +
                   std::chrono::milliseconds(timeout_ms));
  if (max_steps) b.set_max_steps(max_steps);
  return b;
}

// Flags shared by the decision subcommands.
struct DecideFlags {
  std::string method = "onthefly";
  std::uint64_t timeout_ms = 0;
  std::uint64_t max_steps = 0;
  bool no_witness = false;

  DecisionOptions options() const {
    DecisionOptions o;
    o.timeout = std::chrono::milliseconds(timeout_ms);
    o.max_steps = max_steps;
    o.find_witness = !no_witness;
    return o;
  }
};

void add_decide_flags(CLI::App* sub, DecideFlags& f) {
  sub->add_option("--method", f.method, "decision procedure")
      ->check(CLI::IsMember({"onthefly", "standard"}));
  sub->add_option("--timeout", f.timeout_ms,
                  "time budget in milliseconds, 0 = unlimited");
  sub->add_option("--max-steps", f.max_steps, "work-step cap, 0 = unlimited");
  sub->add_flag("--no-witness", f.no_witness, "skip the counterexample search");
}

int report(std::ostream& out, const Verdict& v,
           const PartitionedAlphabet& alphabet, const char* holds,
           const char* fails) {
  switch (v.outcome) {
    case Outcome::Holds:
      out << holds << '\n';
      break;
    case Outcome::Fails:
      out << fails << '\n';
      if (v.witness)
        out << "witness: "
            << (v.witness->empty() ? "(empty word)"
                                   : render_word(alphabet, *v.witness))
            << '\n';
      break;
    case Outcome::TimedOut:
      out << "TIMEOUT\n";
      break;
  }
  out << "d_states=" << v.stats.d_states
      << " p_transitions=" << v.stats.p_transitions
      << " iterations=" << v.stats.iterations << '\n';
  if (v.outcome == Outcome::Holds) return kHolds;
  return v.outcome == Outcome::Fails ? kFails : kTimeout;
}

std::size_t parse_count(const std::string& text) {
  std::size_t pos = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(text, &pos);
  } catch (const std::exception&) {
    throw Error("bad size '" + text + "'");
  }
  if (pos != text.size() || text[0] == '-')
    throw Error("bad size '" + text + "'");
  return static_cast<std::size_t>(value);
}

BenchSize parse_size(const std::string& text) {
  auto x = text.find('x');
  if (x == std::string::npos) return {parse_count(text), 0};
  return {parse_count(text.substr(0, x)), parse_count(text.substr(x + 1))};
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"visibly pushdown automaton toolkit"};
  app.require_subcommand(1);

  std::string accepts_file;
  std::vector<std::string> word_names;
  CLI::App* accepts_cmd =
      app.add_subcommand("accepts", "test whether a word is accepted");
  accepts_cmd->add_option("file", accepts_file, "automaton file")->required();
  accepts_cmd->add_option("word", word_names,
                          "symbol names; omit for the empty word");

  std::string det_file;
  std::string det_mode = "optimized";
  std::string det_pops = "all";
  std::uint64_t det_timeout = 0, det_steps = 0;
  CLI::App* det_cmd =
      app.add_subcommand("determinize", "print an equivalent deterministic "
                                        "automaton");
  det_cmd->add_option("file", det_file, "automaton file")->required();
  det_cmd->add_option("--mode", det_mode, "subset construction variant")
      ->check(CLI::IsMember({"optimized", "intermediate", "original"}));
  det_cmd
      ->add_option("--pops", det_pops,
                   "return rules: 'all' generated frames or only 'reachable' "
                   "ones")
      ->check(CLI::IsMember({"all", "reachable"}));
  det_cmd->add_option("--timeout", det_timeout,
                      "time budget in milliseconds, 0 = unlimited");
  det_cmd->add_option("--max-steps", det_steps, "work-step cap, 0 = unlimited");

  std::string empty_file;
  std::uint64_t empty_timeout = 0, empty_steps = 0;
  CLI::App* empty_cmd =
      app.add_subcommand("empty", "test whether the language is empty");
  empty_cmd->add_option("file", empty_file, "automaton file")->required();
  empty_cmd->add_option("--timeout", empty_timeout,
                        "time budget in milliseconds, 0 = unlimited");
  empty_cmd->add_option("--max-steps", empty_steps,
                        "work-step cap, 0 = unlimited");

  std::string univ_file;
  DecideFlags univ_flags;
  CLI::App* univ_cmd =
      app.add_subcommand("universal", "test whether every word is accepted");
  univ_cmd->add_option("file", univ_file, "automaton file")->required();
  add_decide_flags(univ_cmd, univ_flags);

  std::string incl_a, incl_b;
  DecideFlags incl_flags;
  CLI::App* incl_cmd =
      app.add_subcommand("includes", "test language inclusion L(A) <= L(B)");
  incl_cmd->add_option("a", incl_a, "left automaton file")->required();
  incl_cmd->add_option("b", incl_b, "right automaton file")->required();
  add_decide_flags(incl_cmd, incl_flags);

  int rand_model = 1;
  std::size_t rand_n = 0;
  double rand_f = 0.5;
  std::uint64_t rand_seed = 0;
  CLI::App* rand_cmd =
      app.add_subcommand("random", "print a seeded random automaton");
  rand_cmd->add_option("--model", rand_model, "generator variant")
      ->check(CLI::Range(1, 2));
  rand_cmd->add_option("-n,--states", rand_n, "number of states")->required();
  rand_cmd->add_option("-f,--final-fraction", rand_f,
                       "fraction of final states (model 2)");
  rand_cmd->add_option("--seed", rand_seed, "generator seed");

  std::string bench_problem = "universality";
  std::string bench_method = "onthefly";
  int bench_model = 1;
  double bench_f = 0.5;
  std::vector<std::string> bench_sizes;
  std::size_t bench_samples = 50;
  std::uint64_t bench_timeout = 60000;
  std::uint64_t bench_seed_base = 0;
  std::uint64_t bench_steps = 0;
  unsigned bench_jobs = 1;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "run a benchmark corpus, print CSV");
  bench_cmd->add_option("--problem", bench_problem, "decision problem")
      ->check(CLI::IsMember({"universality", "inclusion"}));
  bench_cmd->add_option("--method", bench_method, "decision procedure")
      ->check(CLI::IsMember({"onthefly", "standard"}));
  bench_cmd->add_option("--model", bench_model, "generator variant")
      ->check(CLI::Range(1, 2));
  bench_cmd->add_option("-f,--final-fraction", bench_f,
                        "fraction of final states (model 2)");
  bench_cmd
      ->add_option("--sizes", bench_sizes,
                   "comma-separated sizes: N for universality, NxM for "
                   "inclusion")
      ->required()
      ->delimiter(',');
  bench_cmd->add_option("--samples", bench_samples, "instances per size");
  bench_cmd->add_option("--timeout", bench_timeout,
                        "per-instance limit in milliseconds");
  bench_cmd->add_option("--seed-base", bench_seed_base,
                        "seed of the first instance");
  bench_cmd->add_option("--max-steps", bench_steps,
                        "per-instance work-step cap, 0 = none");
  bench_cmd->add_option("--jobs", bench_jobs, "concurrent instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kHolds : kUsage;
  }

  try {
    if (accepts_cmd->parsed()) {
      Vpa m = load_vpa(accepts_file);
      bool ok = accepts(m, parse_word(m.alphabet(), word_names));
      out << (ok ? "ACCEPTED" : "REJECTED") << '\n';
      return ok ? kHolds : kFails;
    }

    if (det_cmd->parsed()) {
      Vpa m = load_vpa(det_file);
      DeterminizeOptions opts;
      opts.mode = det_mode == "original"       ? DetMode::Original
                  : det_mode == "intermediate" ? DetMode::Intermediate
                                               : DetMode::Optimized;
      opts.pop_scope = det_pops == "reachable" ? PopScope::ReachableFacts
                                               : PopScope::AllGenerated;
      Budget budget = make_budget(det_timeout, det_steps);
      try {
        out << render_vpa(determinize(m, opts, budget).automaton);
      } catch (const BudgetExceeded&) {
        out << "TIMEOUT\n";
        return kTimeout;
      }
      return kHolds;
    }

    if (empty_cmd->parsed()) {
      Vpa m = load_vpa(empty_file);
      Budget budget = make_budget(empty_timeout, empty_steps);
      try {
        bool empty = is_language_empty(m, budget);
        out << (empty ? "EMPTY" : "NOT EMPTY") << '\n';
        return empty ? kHolds : kFails;
      } catch (const BudgetExceeded&) {
        out << "TIMEOUT\n";
        return kTimeout;
      }
    }

    if (univ_cmd->parsed()) {
      Vpa m = load_vpa(univ_file);
      Verdict v = univ_flags.method == "standard"
                      ? universality_standard(m, univ_flags.options())
                      : universality_on_the_fly(m, univ_flags.options());
      return report(out, v, m.alphabet(), "UNIVERSAL", "NOT UNIVERSAL");
    }

    if (incl_cmd->parsed()) {
      Vpa a = load_vpa(incl_a);
      Vpa b = load_vpa(incl_b);
      Verdict v = incl_flags.method == "standard"
                      ? inclusion_standard(a, b, incl_flags.options())
                      : inclusion_on_the_fly(a, b, incl_flags.options());
      return report(out, v, a.alphabet(), "INCLUDED", "NOT INCLUDED");
    }

    if (rand_cmd->parsed()) {
      Vpa m = rand_model == 1 ? generate_random1(rand_n, rand_seed)
                              : generate_random2(rand_n, rand_f, rand_seed);
      out << render_vpa(m);
      return kHolds;
    }

    if (bench_cmd->parsed()) {
      BenchTask task;
      task.problem = bench_problem == "inclusion" ? BenchProblem::Inclusion
                                                  : BenchProblem::Universality;
      task.method = bench_method == "standard" ? BenchMethod::Standard
                                               : BenchMethod::OnTheFly;
      task.model = bench_model;
      task.final_fraction = bench_f;
      for (const std::string& s : bench_sizes)
        task.sizes.push_back(parse_size(s));
      task.samples = bench_samples;
      task.timeout = std::chrono::milliseconds(bench_timeout);
      task.seed_base = bench_seed_base;
      task.max_steps = bench_steps;
      task.jobs = bench_jobs;
      out << to_csv(run_bench(task));
      return kHolds;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace vpa
