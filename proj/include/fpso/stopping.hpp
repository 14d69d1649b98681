#pragma once

// Stopping rules driven by the measured forcing frequency.  The frequency
// rules are evaluated exactly once per completed window [k*mu, (k+1)*mu);
// the budget rule fires on a plain iteration count.

#include <cstdint>
#include <optional>
#include <variant>

#include "fpso/telemetry.hpp"

namespace fpso {

struct BudgetRule {
  std::int64_t max_iterations = 0;

  bool operator==(const BudgetRule&) const = default;
};

// Fires iff sigma_stag - sigma(I) <= gamma.
struct FullStopRule {
  std::int64_t sigma_stag = 0;
  std::int64_t gamma = 0;
  std::int64_t mu = 0;

  bool operator==(const FullStopRule&) const = default;
};

// Fires iff sigma(I) >= kappa * (sigma_stag - gamma) / D.  kappa in [1, D];
// kappa == D makes the rule equivalent to the full stop.
struct PartialStopRule {
  std::int64_t sigma_stag = 0;
  std::int64_t gamma = 0;
  std::int64_t mu = 0;
  double kappa = 1.0;

  bool operator==(const PartialStopRule&) const = default;
};

using StoppingRule = std::variant<BudgetRule, FullStopRule, PartialStopRule>;

enum class TerminationCause { Budget, FullStop, PartialStop };

struct TerminationReport {
  TerminationCause cause = TerminationCause::Budget;
  std::int64_t iteration = 0;         // multiple of mu for frequency causes
  std::int64_t triggering_sigma = 0;  // sigma of the firing window
  double threshold = 0.0;             // fired comparison's right-hand side
};

// Throws std::invalid_argument when the rule's parameters are unusable
// (mu < 1, gamma < 0, sigma_stag <= gamma, kappa outside [1, D], ...).
void validate(const StoppingRule& rule, int num_dimensions);

bool full_stop_check(std::int64_t sigma_interval, const FullStopRule& rule);
bool partial_stop_check(std::int64_t sigma_interval,
                        const PartialStopRule& rule, int num_dimensions);

// Evaluates one rule against a completed window (frequency rules insist on
// stats spanning exactly mu iterations and ending at `iteration`) or the
// iteration count (budget).  Returns the report when the rule fires.
std::optional<TerminationReport> evaluate(const StoppingRule& rule,
                                          const IntervalStats& stats,
                                          std::int64_t iteration,
                                          int num_dimensions);

std::int64_t rule_window_length(const StoppingRule& rule);  // 0 for budget

}  // namespace fpso
