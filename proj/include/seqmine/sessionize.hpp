#pragma once

#include <string>
#include <vector>

#include "seqmine/core.hpp"

// Inactivity-cutoff session segmentation and the diagnostics used to pick a
// cutoff by inspection.

namespace seqmine::session {

// A maximal run of one student's events whose consecutive gaps are all
// strictly below the cutoff. A gap exactly equal to the cutoff starts a new
// session.
struct Session {
  std::string student_id;
  std::vector<EventRecord> events;  // non-empty, time-ordered
  EpochSeconds start = 0;
  EpochSeconds end = 0;
  double cutoff_minutes = 0.0;
};

// Segments the stream per student; result is ordered by (student_id, start).
// Per student the sessions partition that student's events.
std::vector<Session> build_sessions(const TransactionStream& stream, double cutoff_minutes);

struct CutoffDiagnosticsRow {
  double cutoff_minutes = 0.0;
  std::size_t total_sessions = 0;
  double mean_actions_per_session = 0.0;
  // first event of a session minus last event of the previous session of the
  // same student, averaged class-wide; 0 when no student has two sessions
  double mean_inter_session_gap_minutes = 0.0;
};

// One row per grid value. total_sessions is non-increasing and
// mean_actions_per_session non-decreasing along an increasing grid.
std::vector<CutoffDiagnosticsRow> cutoff_diagnostics(const TransactionStream& stream,
                                                     const std::vector<double>& cutoff_grid);

}  // namespace seqmine::session
