#pragma once

// Forcing-frequency telemetry: per-dimension counts of forced updates over
// iteration intervals, window bookkeeping for the stopping rules and plots,
// and the phase segmentation used by the statistical verifiers.

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "fpso/swarm.hpp"

namespace fpso {

using VectorXi64 = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

// Aligned windows [k*mu, (k+1)*mu): Sliding resets the counters at each
// boundary, Cumulative keeps accumulating from iteration 0.
enum class WindowMode { Cumulative, Sliding };

struct IntervalStats {
  std::int64_t interval_start = 0;  // inclusive
  std::int64_t interval_end = 0;    // exclusive
  VectorXi64 per_dimension;
  std::int64_t total = 0;
};

IntervalStats make_interval(int num_dimensions, std::int64_t start,
                            std::int64_t end);

// Adds a particle move's forced dimensions to the interval.  Throws
// std::out_of_range when the iteration lies outside [start, end).
void record_move(IntervalStats& stats, const MoveOutcome& outcome,
                 std::int64_t iteration);

struct RelativeFrequency {
  double total = 0.0;
  Eigen::VectorXd per_dimension;
};

RelativeFrequency relative_frequency(const IntervalStats& stats);

// Feeds successive windows of length mu.  Call record() for every particle
// move, then on_iteration_complete() once per finished iteration; it returns
// the window's statistics at each boundary.
class WindowTracker {
 public:
  WindowTracker(int num_dimensions, std::int64_t mu, WindowMode mode);

  void record(const MoveOutcome& outcome, std::int64_t iteration);
  std::optional<IntervalStats> on_iteration_complete(
      std::int64_t completed_iterations);

  // Counts of the window currently being filled.
  const IntervalStats& current() const { return current_; }
  std::int64_t windows_emitted() const { return windows_emitted_; }

 private:
  std::int64_t mu_;
  WindowMode mode_;
  IntervalStats current_;
  std::int64_t windows_emitted_ = 0;
};

// One particle move in one dimension, for phase tracking.
struct DimMoveRecord {
  std::int64_t iteration = 0;
  int particle = 0;
  bool forced = false;
  bool attractor_moved = false;  // a local or global attractor update
};

enum class PhaseKind { ForcedRunStart, ForcedRunEnd, LockoutEnd, RecoveryEnd };

struct PhaseEvent {
  PhaseKind kind;
  std::int64_t move_index;      // position in the per-dimension move stream
  std::int64_t run_length = 0;  // ForcedRunEnd only
};

// Incremental segmentation of a per-dimension forced/unforced move stream
// into forced runs, lockouts of exactly num_particles moves, and recoveries.
// Events are only kept when record_events is set; the tallies are always
// maintained so long sessions stay in O(1) memory per dimension.
class PhaseSegmenter {
 public:
  explicit PhaseSegmenter(int num_particles, bool record_events = false);

  void feed(bool forced);
  void finish();  // drops censored open runs and gaps at end of stream

  const std::vector<PhaseEvent>& events() const { return events_; }
  // Histogram keyed by length; index 0 unused.
  const std::vector<std::int64_t>& run_length_counts() const {
    return run_length_counts_;
  }
  const std::vector<std::int64_t>& recovery_length_counts() const {
    return recovery_length_counts_;
  }
  std::int64_t completed_runs() const { return completed_runs_; }
  std::int64_t completed_gaps() const { return completed_gaps_; }
  // Gaps between forced runs shorter than num_particles moves; these
  // contradict the lockout argument, so any occurrence is a violation.
  std::int64_t short_gap_count() const { return short_gap_count_; }
  std::int64_t moves_fed() const { return moves_fed_; }
  bool first_move_forced() const { return first_move_forced_; }

 private:
  void close_run();
  void close_gap();
  void bump(std::vector<std::int64_t>& hist, std::int64_t length);

  int num_particles_;
  bool record_events_;
  std::vector<PhaseEvent> events_;
  std::vector<std::int64_t> run_length_counts_;
  std::vector<std::int64_t> recovery_length_counts_;
  std::int64_t completed_runs_ = 0;
  std::int64_t completed_gaps_ = 0;
  std::int64_t short_gap_count_ = 0;
  std::int64_t moves_fed_ = 0;
  std::int64_t current_run_ = 0;
  std::int64_t current_gap_ = 0;
  bool seen_forced_ = false;
  bool first_move_forced_ = false;
};

struct PhaseTrace {
  std::vector<PhaseEvent> events;
  bool attractor_tainted = false;
  std::int64_t short_gap_count = 0;
  std::int64_t completed_runs = 0;
};

// Segments one dimension's move stream (sorted by iteration then particle,
// every particle moving once per iteration).  Streams containing an
// attractor update are flagged as tainted and yield no events, because the
// phase structure is only meaningful while the attractors hold still.
PhaseTrace track_phases(const std::vector<DimMoveRecord>& stream,
                        int num_particles);

}  // namespace fpso
