#include "vpa/bench.hpp"

#include <future>
#include <sstream>

#include "vpa/decide.hpp"
#include "vpa/error.hpp"
#include "vpa/randgen.hpp"

namespace vpa {

namespace {

struct InstanceResult {
  bool timed_out = false;
  std::uint64_t elapsed_ms = 0;
};

Vpa generate(const BenchTask& task, std::size_t n, std::uint64_t seed) {
  if (task.model == 1) return generate_random1(n, seed);
  return generate_random2(n, task.final_fraction, seed);
}

InstanceResult run_instance(const BenchTask& task, BenchSize size,
                            std::uint64_t seed) {
  Vpa a = generate(task, size.a, seed);
  DecisionOptions opts;
  opts.timeout = task.timeout;
  opts.max_steps = task.max_steps;
  opts.find_witness = false;

  auto start = std::chrono::steady_clock::now();
  Verdict v;
  if (task.problem == BenchProblem::Universality) {
    v = task.method == BenchMethod::OnTheFly ? universality_on_the_fly(a, opts)
                                             : universality_standard(a, opts);
  } else {
    Vpa b = generate(task, size.b, SplitMix64(seed).next());
    v = task.method == BenchMethod::OnTheFly ? inclusion_on_the_fly(a, b, opts)
                                             : inclusion_standard(a, b, opts);
  }
  auto elapsed = std::chrono::steady_clock::now() - start;
  return {v.outcome == Outcome::TimedOut,
          static_cast<std::uint64_t>(
              std::chrono::duration_cast<std::chrono::milliseconds>(elapsed)
                  .count())};
}

std::string size_label(const BenchTask& task, BenchSize size) {
  std::ostringstream out;
  out << size.a;
  if (task.problem == BenchProblem::Inclusion) out << 'x' << size.b;
  return out.str();
}

BenchRow run_size(const BenchTask& task, BenchSize size) {
  BenchRow row;
  row.problem = task.problem == BenchProblem::Universality ? "universality"
                                                           : "inclusion";
  row.method = task.method == BenchMethod::OnTheFly ? "onthefly" : "standard";
  row.size = size_label(task, size);
  row.samples = task.samples;
  row.timeout_limit_ms = static_cast<std::uint64_t>(task.timeout.count());

  std::vector<InstanceResult> results(task.samples);
  unsigned jobs = task.jobs > 0 ? task.jobs : 1;
  std::vector<std::pair<std::size_t, std::future<InstanceResult>>> in_flight;
  auto settle_one = [&] {
    auto& [index, future] = in_flight.front();
    results[index] = future.get();
    in_flight.erase(in_flight.begin());
  };
  for (std::size_t i = 0; i < task.samples; ++i) {
    std::uint64_t seed = task.seed_base + i;
    if (jobs == 1) {
      results[i] = run_instance(task, size, seed);
      continue;
    }
    if (in_flight.size() == jobs) settle_one();
    in_flight.emplace_back(i, std::async(std::launch::async, run_instance,
                                         std::cref(task), size, seed));
  }
  while (!in_flight.empty()) settle_one();

  for (const InstanceResult& r : results) {
    if (r.timed_out) {
      ++row.timeouts;
    } else {
      ++row.successes;
      row.total_time_ms += r.elapsed_ms;
    }
  }
  return row;
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchTask& task) {
  if (task.model != 1 && task.model != 2)
    throw Error("unknown generator model");
  for (BenchSize s : task.sizes) {
    if (task.problem == BenchProblem::Inclusion && s.b == 0)
      throw Error("inclusion sizes must be pairs");
    if (task.problem == BenchProblem::Universality && s.b != 0)
      throw Error("universality sizes must be single integers");
  }
  std::vector<BenchRow> rows;
  for (BenchSize s : task.sizes) rows.push_back(run_size(task, s));
  return rows;
}

std::string to_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "problem,method,size,samples,successes,total_time_ms,timeouts,"
         "timeout_limit_ms\n";
  for (const BenchRow& r : rows)
    out << r.problem << ',' << r.method << ',' << r.size << ',' << r.samples
        << ',' << r.successes << ',' << r.total_time_ms << ',' << r.timeouts
        << ',' << r.timeout_limit_ms << '\n';
  return out.str();
}

}  // namespace vpa
