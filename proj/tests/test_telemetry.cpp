#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "fpso/telemetry.hpp"

using namespace fpso;

namespace {

MoveOutcome outcome_with(std::vector<int> dims) {
  MoveOutcome outcome;
  outcome.forced_dimensions = std::move(dims);
  return outcome;
}

// Feeds a forced/unforced pattern given as a string of 'F' and 'U'.
PhaseSegmenter feed(const std::string& pattern, int num_particles) {
  PhaseSegmenter seg(num_particles, /*record_events=*/true);
  for (char c : pattern) seg.feed(c == 'F');
  seg.finish();
  return seg;
}

std::int64_t count_at(const std::vector<std::int64_t>& hist, std::size_t slot) {
  return slot < hist.size() ? hist[slot] : 0;
}

}  // namespace

TEST_CASE("interval accounting") {
  IntervalStats stats = make_interval(3, 0, 10);
  record_move(stats, outcome_with({0, 2}), 0);
  record_move(stats, outcome_with({2}), 9);
  record_move(stats, outcome_with({}), 5);
  CHECK(stats.total == 3);
  CHECK(stats.per_dimension[0] == 1);
  CHECK(stats.per_dimension[1] == 0);
  CHECK(stats.per_dimension[2] == 2);
  CHECK(stats.per_dimension.sum() == stats.total);

  CHECK_THROWS_AS(record_move(stats, outcome_with({0}), 10), std::out_of_range);
  CHECK_THROWS_AS(record_move(stats, outcome_with({0}), -1), std::out_of_range);
  CHECK_THROWS_AS(record_move(stats, outcome_with({3}), 5), std::out_of_range);
  CHECK_THROWS_AS(make_interval(3, 5, 5), std::invalid_argument);
}

TEST_CASE("relative frequency of the reference stagnation window") {
  IntervalStats stats = make_interval(15, 0, 50000);
  stats.total = 318350;  // 6.367 forced moves per iteration
  stats.per_dimension.setConstant(318350 / 15);
  const RelativeFrequency freq = relative_frequency(stats);
  CHECK(freq.total == 318350.0 / 50000.0);
  CHECK(freq.total == doctest::Approx(6.367));
}

TEST_CASE("sliding windows reset at each boundary") {
  WindowTracker tracker(2, 10, WindowMode::Sliding);
  for (std::int64_t iteration = 0; iteration < 25; ++iteration) {
    tracker.record(outcome_with({0}), iteration);
    if (iteration % 2 == 0) tracker.record(outcome_with({1}), iteration);
    const auto window = tracker.on_iteration_complete(iteration + 1);
    if (iteration == 9 || iteration == 19) {
      REQUIRE(window.has_value());
      CHECK(window->interval_start == iteration + 1 - 10);
      CHECK(window->interval_end == iteration + 1);
      CHECK(window->per_dimension[0] == 10);
      CHECK(window->per_dimension[1] == 5);
      CHECK(window->total == 15);
    } else {
      CHECK_FALSE(window.has_value());
    }
  }
  CHECK(tracker.windows_emitted() == 2);
  // The current window holds the five leftover iterations.
  CHECK(tracker.current().interval_start == 20);
  CHECK(tracker.current().total == 5 + 3);
}

TEST_CASE("cumulative windows keep counting from zero") {
  WindowTracker tracker(1, 5, WindowMode::Cumulative);
  for (std::int64_t iteration = 0; iteration < 15; ++iteration) {
    tracker.record(outcome_with({0}), iteration);
    const auto window = tracker.on_iteration_complete(iteration + 1);
    if (iteration == 4) {
      REQUIRE(window.has_value());
      CHECK(window->interval_start == 0);
      CHECK(window->total == 5);
    }
    if (iteration == 14) {
      REQUIRE(window.has_value());
      CHECK(window->interval_start == 0);
      CHECK(window->interval_end == 15);
      CHECK(window->total == 15);
    }
  }
  CHECK(tracker.windows_emitted() == 3);
}

TEST_CASE("segmenter splits runs, lockouts and recoveries") {
  // Run of 3, then 5 unforced (lockout 3 plus recovery 2) closed by the
  // next forced move.
  PhaseSegmenter seg = feed("FFFUUUUUF", 3);
  CHECK(seg.completed_runs() == 1);
  CHECK(count_at(seg.run_length_counts(), 3) == 1);
  CHECK(seg.completed_gaps() == 1);
  CHECK(count_at(seg.recovery_length_counts(), 2) == 1);
  CHECK(seg.short_gap_count() == 0);
  CHECK(seg.first_move_forced());
}

TEST_CASE("segmenter drops censored tail gaps") {
  // The stream ends mid-gap; a gap that merely ran out of data is not a
  // completed gap and in particular not a short one.
  PhaseSegmenter seg = feed("FFFUU", 3);
  CHECK(seg.completed_runs() == 1);
  CHECK(seg.completed_gaps() == 0);
  CHECK(seg.short_gap_count() == 0);
}

TEST_CASE("segmenter flags gaps shorter than the lockout") {
  PhaseSegmenter seg = feed("FUUF", 3);
  CHECK(seg.completed_runs() == 1);
  CHECK(seg.completed_gaps() == 1);
  CHECK(seg.short_gap_count() == 1);
}

TEST_CASE("segmenter drops open runs and leading unforced moves") {
  // The leading unforced moves precede any run; the trailing run is open.
  PhaseSegmenter seg = feed("UUFFUUF", 2);
  CHECK_FALSE(seg.first_move_forced());
  CHECK(seg.completed_runs() == 1);
  CHECK(count_at(seg.run_length_counts(), 2) == 1);
  CHECK(seg.completed_gaps() == 1);
  // Gap of exactly N moves means a recovery of length zero.
  CHECK(count_at(seg.recovery_length_counts(), 0) == 1);
  CHECK(seg.moves_fed() == 7);
}

TEST_CASE("segmenter event stream") {
  PhaseSegmenter seg = feed("FFUUUF", 2);
  // Indices: run starts at 0, ends at 1; lockout ends at 3; recovery ends
  // at 4; next run starts at 5 (open, dropped).
  const auto& events = seg.events();
  REQUIRE(events.size() == 5);
  CHECK(events[0].kind == PhaseKind::ForcedRunStart);
  CHECK(events[0].move_index == 0);
  CHECK(events[1].kind == PhaseKind::ForcedRunEnd);
  CHECK(events[1].move_index == 1);
  CHECK(events[1].run_length == 2);
  CHECK(events[2].kind == PhaseKind::LockoutEnd);
  CHECK(events[2].move_index == 3);
  CHECK(events[3].kind == PhaseKind::RecoveryEnd);
  CHECK(events[3].move_index == 4);
  CHECK(events[4].kind == PhaseKind::ForcedRunStart);
  CHECK(events[4].move_index == 5);
}

namespace {

std::vector<DimMoveRecord> stream_from(const std::string& pattern,
                                       int num_particles) {
  std::vector<DimMoveRecord> stream;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    DimMoveRecord rec;
    rec.iteration = static_cast<std::int64_t>(i / num_particles);
    rec.particle = static_cast<int>(i % num_particles);
    rec.forced = pattern[i] == 'F';
    stream.push_back(rec);
  }
  return stream;
}

}  // namespace

TEST_CASE("track_phases segments a well-formed stream") {
  const PhaseTrace trace = track_phases(stream_from("FFUUUF", 2), 2);
  CHECK_FALSE(trace.attractor_tainted);
  CHECK(trace.completed_runs == 1);
  CHECK(trace.short_gap_count == 0);
  CHECK(trace.events.size() == 5);
}

TEST_CASE("track_phases refuses tainted and misordered streams") {
  auto tainted = stream_from("FFUU", 2);
  tainted[2].attractor_moved = true;
  const PhaseTrace trace = track_phases(tainted, 2);
  CHECK(trace.attractor_tainted);
  CHECK(trace.events.empty());
  CHECK(trace.completed_runs == 0);

  auto misordered = stream_from("FFUU", 2);
  misordered[1].particle = 0;
  CHECK_THROWS_AS(track_phases(misordered, 2), std::invalid_argument);

  auto skipped = stream_from("FFUU", 2);
  skipped[2].iteration = 5;
  CHECK_THROWS_AS(track_phases(skipped, 2), std::invalid_argument);

  CHECK_THROWS_AS(track_phases({}, 2), std::invalid_argument);
}
