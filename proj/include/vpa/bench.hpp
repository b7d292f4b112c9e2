#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

namespace vpa {

enum class BenchProblem { Universality, Inclusion };
enum class BenchMethod { OnTheFly, Standard };

/// One corpus point: a universality size n (b == 0) or an inclusion pair
/// (a states, b states).
struct BenchSize {
  std::size_t a = 0;
  std::size_t b = 0;
};

struct BenchTask {
  BenchProblem problem = BenchProblem::Universality;
  BenchMethod method = BenchMethod::OnTheFly;
  int model = 1;                 // random generator variant, 1 or 2
  double final_fraction = 0.5;   // model 2 only
  std::vector<BenchSize> sizes;
  std::size_t samples = 50;
  std::chrono::milliseconds timeout{60000};
  std::uint64_t seed_base = 0;
  std::uint64_t max_steps = 0;   // extra per-instance cap, 0 = none
  unsigned jobs = 1;             // concurrently running instances
};

/// Aggregate for one size point; successes + timeouts == samples and
/// total_time_ms sums successful runs only.
struct BenchRow {
  std::string problem;
  std::string method;
  std::string size;  // "20" for universality, "100x5" for inclusion
  std::size_t samples = 0;
  std::size_t successes = 0;
  std::uint64_t total_time_ms = 0;
  std::size_t timeouts = 0;
  std::uint64_t timeout_limit_ms = 0;
};

/// Runs the corpus: instance i of a size point is seeded with seed_base + i
/// (an inclusion pair derives the right-side seed from the left one), solved
/// under the per-instance timeout, and aggregated into one row per size.
/// Everything except the time column is deterministic in the task.
std::vector<BenchRow> run_bench(const BenchTask& task);

/// Header plus one line per row, columns in BenchRow order.
std::string to_csv(const std::vector<BenchRow>& rows);

}  // namespace vpa
