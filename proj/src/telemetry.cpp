#include "fpso/telemetry.hpp"

#include <stdexcept>

namespace fpso {

namespace {
// Tail bucket for the phase-length tallies, so one pathological stream
// cannot blow up the histogram storage.
constexpr std::int64_t kHistCap = 4096;
}  // namespace

IntervalStats make_interval(int num_dimensions, std::int64_t start,
                            std::int64_t end) {
  if (num_dimensions < 1) throw std::invalid_argument("interval needs dimensions");
  if (end <= start) throw std::invalid_argument("interval must not be empty");
  IntervalStats stats;
  stats.interval_start = start;
  stats.interval_end = end;
  stats.per_dimension = VectorXi64::Zero(num_dimensions);
  return stats;
}

void record_move(IntervalStats& stats, const MoveOutcome& outcome,
                 std::int64_t iteration) {
  if (iteration < stats.interval_start || iteration >= stats.interval_end)
    throw std::out_of_range("move lies outside the interval");
  for (int dim : outcome.forced_dimensions) {
    if (dim < 0 || dim >= stats.per_dimension.size())
      throw std::out_of_range("forced dimension out of range");
    ++stats.per_dimension[dim];
    ++stats.total;
  }
}

RelativeFrequency relative_frequency(const IntervalStats& stats) {
  const auto length =
      static_cast<double>(stats.interval_end - stats.interval_start);
  if (length <= 0.0) throw std::invalid_argument("empty interval");
  RelativeFrequency freq;
  freq.total = static_cast<double>(stats.total) / length;
  freq.per_dimension = stats.per_dimension.cast<double>() / length;
  return freq;
}

WindowTracker::WindowTracker(int num_dimensions, std::int64_t mu,
                             WindowMode mode)
    : mu_(mu), mode_(mode), current_(make_interval(num_dimensions, 0, mu)) {
  if (mu < 1) throw std::invalid_argument("window length must be positive");
}

void WindowTracker::record(const MoveOutcome& outcome, std::int64_t iteration) {
  record_move(current_, outcome, iteration);
}

std::optional<IntervalStats> WindowTracker::on_iteration_complete(
    std::int64_t completed_iterations) {
  if (completed_iterations != current_.interval_end) return std::nullopt;
  IntervalStats emitted = current_;
  ++windows_emitted_;
  if (mode_ == WindowMode::Sliding) {
    current_.interval_start = current_.interval_end;
    current_.interval_end += mu_;
    current_.per_dimension.setZero();
    current_.total = 0;
  } else {
    current_.interval_end += mu_;
  }
  return emitted;
}

PhaseSegmenter::PhaseSegmenter(int num_particles, bool record_events)
    : num_particles_(num_particles), record_events_(record_events) {
  if (num_particles < 2)
    throw std::invalid_argument("phase segmentation needs at least two particles");
}

void PhaseSegmenter::bump(std::vector<std::int64_t>& hist, std::int64_t length) {
  const std::int64_t slot = std::min(length, kHistCap);
  if (static_cast<std::int64_t>(hist.size()) <= slot) hist.resize(slot + 1, 0);
  ++hist[slot];
}

void PhaseSegmenter::close_run() {
  // The closing move is the current one, so the run ended one move earlier.
  ++completed_runs_;
  bump(run_length_counts_, current_run_);
  if (record_events_)
    events_.push_back(
        {PhaseKind::ForcedRunEnd, moves_fed_ - 2, current_run_});
  current_run_ = 0;
}

void PhaseSegmenter::close_gap() {
  ++completed_gaps_;
  if (current_gap_ < num_particles_) {
    ++short_gap_count_;
  } else {
    bump(recovery_length_counts_, current_gap_ - num_particles_);
  }
  current_gap_ = 0;
}

void PhaseSegmenter::feed(bool forced) {
  if (moves_fed_ == 0) first_move_forced_ = forced;
  const std::int64_t index = moves_fed_;
  ++moves_fed_;
  if (forced) {
    if (current_gap_ > 0) {
      if (record_events_ && current_gap_ >= num_particles_)
        events_.push_back({PhaseKind::RecoveryEnd, index - 1, 0});
      close_gap();
    }
    if (current_run_ == 0 && record_events_)
      events_.push_back({PhaseKind::ForcedRunStart, index, 0});
    ++current_run_;
    seen_forced_ = true;
  } else {
    if (current_run_ > 0) close_run();
    if (seen_forced_) {
      ++current_gap_;
      if (record_events_ && current_gap_ == num_particles_)
        events_.push_back({PhaseKind::LockoutEnd, index, 0});
    }
    // Moves before the first forced run belong to no phase.
  }
}

void PhaseSegmenter::finish() {
  // Open runs and open gaps at the end of the stream are censored, their
  // final length is unknown, so neither is counted.
  current_run_ = 0;
  current_gap_ = 0;
}

PhaseTrace track_phases(const std::vector<DimMoveRecord>& stream,
                        int num_particles) {
  if (stream.empty()) throw std::invalid_argument("empty move stream");
  PhaseTrace trace;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const DimMoveRecord& rec = stream[i];
    if (rec.particle != static_cast<int>(i % num_particles) ||
        rec.iteration !=
            stream[0].iteration + static_cast<std::int64_t>(i / num_particles))
      throw std::invalid_argument(
          "stream is not one move per particle per iteration in order");
    if (rec.attractor_moved) trace.attractor_tainted = true;
  }
  // Phase structure is only defined while the attractors hold still, so a
  // tainted stream is refused rather than segmented.
  if (trace.attractor_tainted) return trace;
  PhaseSegmenter seg(num_particles, /*record_events=*/true);
  for (const DimMoveRecord& rec : stream) seg.feed(rec.forced);
  seg.finish();
  trace.events = seg.events();
  trace.short_gap_count = seg.short_gap_count();
  trace.completed_runs = seg.completed_runs();
  return trace;
}

}  // namespace fpso
