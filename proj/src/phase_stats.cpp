#include "fpso/phase_stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <sstream>

#include "fpso/stats.hpp"
#include "fpso/telemetry.hpp"

namespace fpso {

void VerifierConfig::validate() const {
  SwarmConfig sc;
  sc.num_particles = num_particles;
  sc.num_dimensions = num_dimensions;
  sc.chi = chi;
  sc.c1 = c1;
  sc.c2 = c2;
  sc.delta = delta;
  sc.validate();
  if (min_samples < 1) throw std::invalid_argument("verifier needs samples");
  if (max_iterations < 1) throw std::invalid_argument("verifier needs iterations");
}

namespace {

// Runs the calibration regime, dispatching every dimension move to the
// observer; `done` is polled once per iteration.  Returns the number of
// attractor updates seen (expected 0 while the pulsation statistics hold).
std::int64_t run_session(const VerifierConfig& config, MoveObserver& observer,
                         const std::function<bool()>& done) {
  SwarmConfig sc;
  sc.num_particles = config.num_particles;
  sc.num_dimensions = config.num_dimensions;
  sc.chi = config.chi;
  sc.c1 = config.c1;
  sc.c2 = config.c2;
  sc.delta = config.delta;
  sc.mode = Mode::Forced;
  sc.fault = config.fault;
  const Objective objective =
      make_objective(config.objective, config.num_dimensions);
  const Eigen::VectorXd plant = objective.optimum_position();
  SwarmState state = initialize_at(sc, objective, plant, Rng(config.seed));
  std::int64_t attractor_updates = 0;
  std::vector<MoveOutcome> outcomes;
  for (std::int64_t i = 0; i < config.max_iterations && !done(); ++i) {
    step_iteration(state, objective, outcomes, &observer);
    for (int n = 0; n < config.num_particles; ++n)
      // Value ties on the planted point itself are no-ops; only an update
      // that moved an attractor off the plant breaks the regime.
      if ((outcomes[n].local_updated || outcomes[n].global_updated) &&
          state.particles[n].position != plant)
        ++attractor_updates;
  }
  return attractor_updates;
}

double contribution_after(double pre_distance, double velocity) {
  return std::abs(velocity) + std::abs(pre_distance - velocity);
}

// Sign cases of (pre-move distance, forced velocity) from the half
// probability argument; boundaries have measure zero so ties are arbitrary.
int sign_case(double distance, double velocity) {
  if (distance >= 0.0) {
    if (velocity >= distance) return 0;  // v >= delta_d >= 0
    if (velocity >= 0.0) return 1;       // delta_d > v >= 0
    return 2;                            // delta_d >= 0 > v
  }
  if (velocity <= distance) return 3;  // v <= delta_d < 0
  if (velocity <= 0.0) return 4;       // delta_d < v <= 0
  return 5;                            // delta_d < 0 < v
}

struct LockoutScanner : MoveObserver {
  LockoutScanner(int num_particles, int num_dimensions, double delta)
      : num_particles(num_particles), delta(delta),
        lockout_until(num_dimensions, -1) {}

  void on_dimension_move(int /*particle*/, int dim, bool forced,
                         double pre_move_distance,
                         double new_velocity) override {
    if (dim == 0) ++move_index;
    if (forced && move_index <= lockout_until[dim]) ++violations;
    if (contribution_after(pre_move_distance, new_velocity) >= delta) {
      lockout_until[dim] = move_index + num_particles;
      ++samples;
    }
  }

  int num_particles;
  double delta;
  std::vector<std::int64_t> lockout_until;
  std::int64_t move_index = -1;  // one slot per particle move, all dimensions
  std::int64_t violations = 0;
  std::int64_t samples = 0;
};

struct PairCounter : MoveObserver {
  explicit PairCounter(int num_dimensions)
      : last_forced(num_dimensions, 0), prev_distance(num_dimensions, 0.0),
        prev_velocity(num_dimensions, 0.0), dim_events(num_dimensions, 0),
        dim_successes(num_dimensions, 0) {}

  void on_dimension_move(int /*particle*/, int dim, bool forced,
                         double pre_move_distance,
                         double new_velocity) override {
    if (last_forced[dim] == 1) {
      ++events;
      ++dim_events[dim];
      const int c = sign_case(prev_distance[dim], prev_velocity[dim]);
      ++case_events[c];
      if (forced) {
        ++successes;
        ++dim_successes[dim];
        ++case_successes[c];
      }
    }
    last_forced[dim] = forced ? 1 : 2;
    prev_distance[dim] = pre_move_distance;
    prev_velocity[dim] = new_velocity;
  }

  std::vector<std::uint8_t> last_forced;  // 0 none yet, 1 forced, 2 regular
  std::vector<double> prev_distance;
  std::vector<double> prev_velocity;
  std::vector<std::int64_t> dim_events;
  std::vector<std::int64_t> dim_successes;
  std::array<std::int64_t, 6> case_events{};
  std::array<std::int64_t, 6> case_successes{};
  std::int64_t events = 0;
  std::int64_t successes = 0;
};

struct RunCollector : MoveObserver {
  RunCollector(int num_particles, int num_dimensions) {
    segmenters.reserve(num_dimensions);
    for (int d = 0; d < num_dimensions; ++d)
      segmenters.emplace_back(num_particles);
  }

  void on_dimension_move(int /*particle*/, int dim, bool forced,
                         double /*pre*/, double /*velocity*/) override {
    segmenters[dim].feed(forced);
  }

  std::int64_t total_completed_runs() const {
    std::int64_t total = 0;
    for (const PhaseSegmenter& seg : segmenters) total += seg.completed_runs();
    return total;
  }

  std::vector<PhaseSegmenter> segmenters;
};

struct RecoveryCounter : MoveObserver {
  RecoveryCounter(int num_particles, int num_dimensions, double delta)
      : num_dimensions(num_dimensions), delta(delta),
        prev_own_forced(
            static_cast<std::size_t>(num_particles) * num_dimensions, 0) {}

  void on_dimension_move(int particle, int dim, bool forced,
                         double pre_move_distance,
                         double new_velocity) override {
    std::uint8_t& state =
        prev_own_forced[static_cast<std::size_t>(particle) * num_dimensions +
                        dim];
    if (state == 1 && !forced) {
      ++events;
      if (contribution_after(pre_move_distance, new_velocity) >= delta)
        ++successes;
    }
    state = forced ? 1 : 2;
  }

  int num_dimensions;
  double delta;
  std::vector<std::uint8_t> prev_own_forced;
  std::int64_t events = 0;
  std::int64_t successes = 0;
};

void require_samples(std::int64_t collected, std::int64_t required,
                     const char* what) {
  if (collected < required)
    throw InsufficientSamplesError(
        std::string(what) + ": session ended with too few conditioning events",
        collected, required);
}

// Critical value of the chi-squared distribution by bisection on the CDF.
double chi_squared_quantile(double probability, int dof) {
  double lo = 0.0, hi = 1000.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (stats::chi_squared_cdf(mid, dof) < probability ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct RunHistogram {
  // Bins for lengths 1..10 plus a tail bin for lengths >= 11.
  static constexpr int kBins = 11;
  std::array<std::int64_t, kBins> observed{};
  std::array<double, kBins> probability{};
  std::int64_t runs = 0;
  double mean_length = 0.0;
  double chi_square = 0.0;
  double p_value = 0.0;

  void fill(const std::vector<PhaseSegmenter>& segmenters) {
    double length_sum = 0.0;
    for (const PhaseSegmenter& seg : segmenters) {
      const auto& counts = seg.run_length_counts();
      for (std::size_t len = 1; len < counts.size(); ++len) {
        if (counts[len] == 0) continue;
        runs += counts[len];
        length_sum += static_cast<double>(counts[len]) * static_cast<double>(len);
        const int bin = len >= kBins ? kBins - 1 : static_cast<int>(len) - 1;
        observed[bin] += counts[len];
      }
    }
    mean_length = runs > 0 ? length_sum / static_cast<double>(runs) : 0.0;
    for (int k = 1; k <= kBins - 1; ++k)
      probability[k - 1] = std::pow(0.5, k);  // P[run length = k] = 2^-k
    probability[kBins - 1] = std::pow(0.5, kBins - 1);  // tail, 2^-10
    chi_square = 0.0;
    for (int b = 0; b < kBins; ++b) {
      const double expected = probability[b] * static_cast<double>(runs);
      const double diff = static_cast<double>(observed[b]) - expected;
      chi_square += diff * diff / expected;
    }
    p_value = 1.0 - stats::chi_squared_cdf(chi_square, kBins - 1);
  }
};

}  // namespace

LemmaReport verify_lockout(const VerifierConfig& config) {
  config.validate();
  LockoutScanner scanner(config.num_particles, config.num_dimensions,
                         config.delta);
  run_session(config, scanner,
              [&] { return scanner.samples >= config.min_samples; });
  require_samples(scanner.samples, config.min_samples, "lockout");
  LemmaReport report;
  report.lemma = Lemma::Lockout;
  report.samples = scanner.samples;
  report.statistic = static_cast<double>(scanner.violations);
  report.expected = 0.0;
  report.standard_error = 0.0;
  report.pass = scanner.violations == 0;
  std::ostringstream details;
  details << scanner.violations << " forced moves inside a lockout across "
          << scanner.samples << " scanned contributions >= delta";
  report.details = details.str();
  return report;
}

LemmaReport verify_half_probability(const VerifierConfig& config) {
  config.validate();
  PairCounter counter(config.num_dimensions);
  run_session(config, counter,
              [&] { return counter.events >= config.min_samples; });
  require_samples(counter.events, config.min_samples, "half probability");
  LemmaReport report;
  report.lemma = Lemma::HalfProbability;
  report.samples = counter.events;
  report.statistic =
      static_cast<double>(counter.successes) / static_cast<double>(counter.events);
  report.expected = 0.5;
  report.standard_error =
      std::sqrt(0.25 / static_cast<double>(counter.events));
  bool pass = std::abs(report.statistic - report.expected) <=
              3.0 * report.standard_error;
  report.per_dimension_statistic.resize(config.num_dimensions);
  for (int d = 0; d < config.num_dimensions; ++d) {
    const double n = static_cast<double>(counter.dim_events[d]);
    if (n == 0.0) {
      pass = false;
      report.per_dimension_statistic[d] = -1.0;
      continue;
    }
    const double freq = static_cast<double>(counter.dim_successes[d]) / n;
    report.per_dimension_statistic[d] = freq;
    if (std::abs(freq - 0.5) > 3.0 * std::sqrt(0.25 / n)) pass = false;
  }
  report.case_counts.assign(counter.case_events.begin(),
                            counter.case_events.end());
  report.case_statistic.resize(6);
  for (int c = 0; c < 6; ++c) {
    // Every sign case of the decomposition must actually occur.
    if (counter.case_events[c] == 0) pass = false;
    report.case_statistic[c] =
        counter.case_events[c] == 0
            ? -1.0
            : static_cast<double>(counter.case_successes[c]) /
                  static_cast<double>(counter.case_events[c]);
  }
  report.pass = pass;
  std::ostringstream details;
  details << "conditional forced frequency " << report.statistic << " over "
          << counter.events << " events (3 SE = " << 3.0 * report.standard_error
          << ")";
  report.details = details.str();
  return report;
}

LemmaReport verify_geometric(const VerifierConfig& config) {
  config.validate();
  RunCollector collector(config.num_particles, config.num_dimensions);
  std::int64_t check_at = 0;
  run_session(config, collector, [&] {
    // total_completed_runs is O(D); sample it sparsely.
    if (++check_at % 64 != 0) return false;
    return collector.total_completed_runs() >= config.min_samples;
  });
  for (PhaseSegmenter& seg : collector.segmenters) seg.finish();
  RunHistogram hist;
  hist.fill(collector.segmenters);
  require_samples(hist.runs, config.min_samples, "geometric runs");

  LemmaReport report;
  report.lemma = Lemma::GeometricRuns;
  report.samples = hist.runs;
  report.statistic = hist.chi_square;
  report.expected = chi_squared_quantile(0.99, RunHistogram::kBins - 1);
  report.p_value = hist.p_value;
  report.standard_error = std::sqrt(2.0 / static_cast<double>(hist.runs));
  report.histogram_observed.assign(hist.observed.begin(), hist.observed.end());
  report.histogram_expected.resize(RunHistogram::kBins);
  bool bins_ok = true;
  for (int b = 0; b < RunHistogram::kBins; ++b) {
    const double n = static_cast<double>(hist.runs);
    const double expected = hist.probability[b] * n;
    report.histogram_expected[b] = expected;
    const double se = std::sqrt(n * hist.probability[b] * (1.0 - hist.probability[b]));
    if (std::abs(static_cast<double>(hist.observed[b]) - expected) > 3.0 * se)
      bins_ok = false;
  }
  const bool mean_ok =
      std::abs(hist.mean_length - 2.0) <= 3.0 * report.standard_error;
  report.pass = hist.p_value >= 0.01 && bins_ok && mean_ok;
  std::ostringstream details;
  details << "chi-square " << hist.chi_square << " (p = " << hist.p_value
          << ") over " << hist.runs << " completed runs, mean length "
          << hist.mean_length;
  report.details = details.str();
  return report;
}

std::vector<LemmaReport> verify_recovery_bound(const VerifierConfig& config,
                                               const std::vector<double>& chis) {
  if (chis.empty()) throw std::invalid_argument("recovery bound needs chi values");
  std::vector<LemmaReport> reports;
  reports.reserve(chis.size());
  for (double chi : chis) {
    VerifierConfig varied = config;
    varied.chi = chi;
    varied.validate();
    RecoveryCounter counter(varied.num_particles, varied.num_dimensions,
                            varied.delta);
    run_session(varied, counter,
                [&] { return counter.events >= varied.min_samples; });
    require_samples(counter.events, varied.min_samples, "recovery bound");
    LemmaReport report;
    report.lemma = Lemma::RecoveryBound;
    report.samples = counter.events;
    report.statistic = static_cast<double>(counter.successes) /
                       static_cast<double>(counter.events);
    report.expected = recovery_bound(chi);
    report.standard_error =
        std::sqrt(0.25 / static_cast<double>(counter.events));
    report.vacuous = report.expected <= 0.0;
    report.pass =
        report.statistic >= report.expected - 3.0 * report.standard_error;
    std::ostringstream details;
    details << "chi = " << chi << ": P[phi >= delta | first regular move] = "
            << report.statistic << ", bound " << report.expected
            << (report.vacuous ? " (vacuous)" : "");
    report.details = details.str();
    reports.push_back(std::move(report));
  }
  return reports;
}

TheoremReport verify_theorem(const VerifierConfig& config) {
  config.validate();
  struct CombinedObserver : MoveObserver {
    CombinedObserver(const VerifierConfig& cfg)
        : scanner(cfg.num_particles, cfg.num_dimensions, cfg.delta),
          collector(cfg.num_particles, cfg.num_dimensions) {}
    void on_dimension_move(int particle, int dim, bool forced, double pre,
                           double velocity) override {
      scanner.on_dimension_move(particle, dim, forced, pre, velocity);
      collector.on_dimension_move(particle, dim, forced, pre, velocity);
    }
    LockoutScanner scanner;
    RunCollector collector;
  } observer(config);

  std::int64_t check_at = 0;
  const std::int64_t attractor_updates =
      run_session(config, observer, [&] {
        if (++check_at % 64 != 0) return false;
        return observer.collector.total_completed_runs() >= config.min_samples;
      });
  for (PhaseSegmenter& seg : observer.collector.segmenters) seg.finish();

  TheoremReport report;
  report.attractor_updates = attractor_updates;
  report.streams_start_forced = true;
  double recovery_sum = 0.0;
  std::int64_t recovery_count = 0;
  for (const PhaseSegmenter& seg : observer.collector.segmenters) {
    report.completed_runs += seg.completed_runs();
    report.completed_gaps += seg.completed_gaps();
    report.short_gaps += seg.short_gap_count();
    if (!seg.first_move_forced()) report.streams_start_forced = false;
    const auto& rec = seg.recovery_length_counts();
    if (!rec.empty()) report.recovery_zero_count += rec[0];
    for (std::size_t len = 0; len < rec.size(); ++len) {
      recovery_sum += static_cast<double>(rec[len]) * static_cast<double>(len);
      recovery_count += rec[len];
    }
  }
  report.lockout_violations = observer.scanner.violations;
  report.mean_recovery_length =
      recovery_count > 0 ? recovery_sum / static_cast<double>(recovery_count)
                         : 0.0;
  RunHistogram hist;
  hist.fill(observer.collector.segmenters);
  require_samples(hist.runs, config.min_samples, "theorem");
  report.mean_run_length = hist.mean_length;
  report.run_chi_square = hist.chi_square;
  report.run_p_value = hist.p_value;
  report.pass = report.short_gaps == 0 && report.lockout_violations == 0 &&
                report.streams_start_forced && report.run_p_value >= 0.01 &&
                report.recovery_zero_count > 0 && attractor_updates == 0;
  std::ostringstream details;
  details << report.completed_runs << " runs, " << report.completed_gaps
          << " gaps (" << report.short_gaps << " short), mean recovery "
          << report.mean_recovery_length << ", run p = " << report.run_p_value;
  report.details = details.str();
  return report;
}

}  // namespace fpso
