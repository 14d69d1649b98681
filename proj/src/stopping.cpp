#include "fpso/stopping.hpp"

#include <stdexcept>

namespace fpso {

namespace {

void validate_frequency_core(std::int64_t sigma_stag, std::int64_t gamma,
                             std::int64_t mu) {
  if (mu < 1) throw std::invalid_argument("window length mu must be positive");
  if (gamma < 0) throw std::invalid_argument("gamma must be non-negative");
  if (sigma_stag <= gamma)
    throw std::invalid_argument("sigma_stag must exceed gamma");
}

void check_window(const IntervalStats& stats, std::int64_t mu,
                  std::int64_t iteration) {
  if (stats.interval_end - stats.interval_start != mu)
    throw std::invalid_argument("frequency rule evaluated on a window of the wrong length");
  if (iteration != stats.interval_end)
    throw std::invalid_argument("frequency rule must be evaluated at the window boundary");
}

}  // namespace

void validate(const StoppingRule& rule, int num_dimensions) {
  if (num_dimensions < 1) throw std::invalid_argument("dimensions must be positive");
  if (const auto* budget = std::get_if<BudgetRule>(&rule)) {
    if (budget->max_iterations < 1)
      throw std::invalid_argument("budget must be positive");
  } else if (const auto* full = std::get_if<FullStopRule>(&rule)) {
    validate_frequency_core(full->sigma_stag, full->gamma, full->mu);
  } else {
    const auto& partial = std::get<PartialStopRule>(rule);
    validate_frequency_core(partial.sigma_stag, partial.gamma, partial.mu);
    if (!(partial.kappa >= 1.0) ||
        !(partial.kappa <= static_cast<double>(num_dimensions)))
      throw std::invalid_argument("kappa must lie in [1, D]");
  }
}

bool full_stop_check(std::int64_t sigma_interval, const FullStopRule& rule) {
  return rule.sigma_stag - sigma_interval <= rule.gamma;
}

bool partial_stop_check(std::int64_t sigma_interval,
                        const PartialStopRule& rule, int num_dimensions) {
  const double threshold = rule.kappa *
                           static_cast<double>(rule.sigma_stag - rule.gamma) /
                           static_cast<double>(num_dimensions);
  return static_cast<double>(sigma_interval) >= threshold;
}

std::optional<TerminationReport> evaluate(const StoppingRule& rule,
                                          const IntervalStats& stats,
                                          std::int64_t iteration,
                                          int num_dimensions) {
  validate(rule, num_dimensions);
  if (const auto* budget = std::get_if<BudgetRule>(&rule)) {
    if (iteration >= budget->max_iterations)
      return TerminationReport{TerminationCause::Budget, iteration, stats.total,
                               static_cast<double>(budget->max_iterations)};
    return std::nullopt;
  }
  if (const auto* full = std::get_if<FullStopRule>(&rule)) {
    check_window(stats, full->mu, iteration);
    if (full_stop_check(stats.total, *full))
      return TerminationReport{
          TerminationCause::FullStop, iteration, stats.total,
          static_cast<double>(full->sigma_stag - full->gamma)};
    return std::nullopt;
  }
  const auto& partial = std::get<PartialStopRule>(rule);
  check_window(stats, partial.mu, iteration);
  if (partial_stop_check(stats.total, partial, num_dimensions))
    return TerminationReport{
        TerminationCause::PartialStop, iteration, stats.total,
        partial.kappa * static_cast<double>(partial.sigma_stag - partial.gamma) /
            static_cast<double>(num_dimensions)};
  return std::nullopt;
}

std::int64_t rule_window_length(const StoppingRule& rule) {
  if (const auto* full = std::get_if<FullStopRule>(&rule)) return full->mu;
  if (const auto* partial = std::get_if<PartialStopRule>(&rule)) return partial->mu;
  return 0;
}

}  // namespace fpso
