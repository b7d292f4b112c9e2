#pragma once

#include <chrono>
#include <cstdint>
#include <optional>

namespace vpa {

/// Thrown when a Budget runs out. deadline_hit distinguishes wall-clock
/// expiry from the step-count watchdog.
struct BudgetExceeded {
  bool deadline_hit = false;
};

/// Shared work budget for the long-running fixpoints. Every worklist step
/// calls step(), which checks the step bound and polls the deadline.
class Budget {
 public:
  Budget() = default;

  static Budget with_timeout(std::chrono::milliseconds ms) {
    Budget b;
    b.deadline_ = std::chrono::steady_clock::now() + ms;
    return b;
  }

  void set_deadline(std::chrono::steady_clock::time_point t) { deadline_ = t; }
  void set_max_steps(std::uint64_t n) { max_steps_ = n; }

  void step() {
    ++steps_;
    if (max_steps_ != 0 && steps_ > max_steps_) throw BudgetExceeded{false};
    if (deadline_ && std::chrono::steady_clock::now() > *deadline_)
      throw BudgetExceeded{true};
  }

  std::uint64_t steps() const { return steps_; }

 private:
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  std::uint64_t max_steps_ = 0;
  std::uint64_t steps_ = 0;
};

}  // namespace vpa
