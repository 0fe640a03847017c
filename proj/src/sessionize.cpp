#include "seqmine/sessionize.hpp"

namespace seqmine::session {

std::vector<Session> build_sessions(const TransactionStream& stream, double cutoff_minutes) {
  if (cutoff_minutes <= 0.0) {
    throw Error(ErrorKind::BadConfig, "session cutoff must be positive");
  }
  const double cutoff_seconds = cutoff_minutes * 60.0;
  std::vector<Session> sessions;
  for (const auto& [student, positions] : stream.by_student) {
    Session current;
    for (std::size_t k = 0; k < positions.size(); ++k) {
      const EventRecord& ev = stream.events[positions[k]];
      const bool starts_new =
          current.events.empty() ||
          static_cast<double>(ev.timestamp - current.events.back().timestamp) >= cutoff_seconds;
      if (starts_new && !current.events.empty()) {
        sessions.push_back(std::move(current));
        current = Session{};
      }
      if (current.events.empty()) {
        current.student_id = student;
        current.start = ev.timestamp;
        current.cutoff_minutes = cutoff_minutes;
      }
      current.end = ev.timestamp;
      current.events.push_back(ev);
    }
    if (!current.events.empty()) sessions.push_back(std::move(current));
  }
  return sessions;
}

std::vector<CutoffDiagnosticsRow> cutoff_diagnostics(const TransactionStream& stream,
                                                     const std::vector<double>& cutoff_grid) {
  if (cutoff_grid.empty()) {
    throw Error(ErrorKind::BadConfig, "cutoff grid must not be empty");
  }
  for (std::size_t i = 0; i + 1 < cutoff_grid.size(); ++i) {
    if (!(cutoff_grid[i] < cutoff_grid[i + 1])) {
      throw Error(ErrorKind::BadConfig, "cutoff grid must be strictly increasing");
    }
  }
  if (stream.events.empty()) {
    throw Error(ErrorKind::EmptyStream, "no events to diagnose");
  }

  std::vector<CutoffDiagnosticsRow> rows;
  rows.reserve(cutoff_grid.size());
  for (double cutoff : cutoff_grid) {
    const std::vector<Session> sessions = build_sessions(stream, cutoff);
    CutoffDiagnosticsRow row;
    row.cutoff_minutes = cutoff;
    row.total_sessions = sessions.size();
    std::size_t total_events = 0;
    double gap_sum_minutes = 0.0;
    std::size_t gap_count = 0;
    for (std::size_t i = 0; i < sessions.size(); ++i) {
      total_events += sessions[i].events.size();
      if (i > 0 && sessions[i].student_id == sessions[i - 1].student_id) {
        gap_sum_minutes += static_cast<double>(sessions[i].start - sessions[i - 1].end) / 60.0;
        ++gap_count;
      }
    }
    row.mean_actions_per_session =
        sessions.empty() ? 0.0 : static_cast<double>(total_events) / sessions.size();
    row.mean_inter_session_gap_minutes = gap_count == 0 ? 0.0 : gap_sum_minutes / gap_count;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace seqmine::session
