#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Core value types shared by every pipeline stage: timestamps, events,
// roster entries and the merged class-level transaction stream.

namespace seqmine {

enum class ErrorKind {
  MalformedRow,
  UnknownPlatform,
  DuplicateStudent,
  EmptySession,
  NoSessions,
  EmptySessionList,
  InsufficientData,
  UnknownStudent,
  EmptyGroup,
  EmptyStream,
  InvalidProfile,
  UnwritableOutput,
  BadPattern,
  BadConfig,
  IoError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// All timestamps are UTC epoch seconds; finer input precision is truncated.
using EpochSeconds = std::int64_t;

// "2015-09-01T10:00:00Z" style, with optional fractional seconds (dropped)
// and optional +HH:MM / -HH:MM offset. Returns nullopt on malformed input.
std::optional<EpochSeconds> parse_rfc3339(const std::string& text);

// Plain integer epoch seconds (optional leading '-').
std::optional<EpochSeconds> parse_epoch(const std::string& text);

std::string format_rfc3339(EpochSeconds t);

struct EventRecord {
  std::string student_id;
  EpochSeconds timestamp = 0;
  char platform = '?';  // single uppercase letter from the class alphabet
  std::string action_kind;
  std::string source_tag;
};

enum class Group { Distinction, NonDistinction };

const char* to_string(Group g);

struct RosterEntry {
  std::string student_id;
  double final_grade = 0.0;
  Group group = Group::NonDistinction;
};

// Class-level event stream, non-decreasing in timestamp, with a per-student
// index into `events`. Per-student sublists are time-ordered as well.
struct TransactionStream {
  std::vector<EventRecord> events;
  std::map<std::string, std::vector<std::size_t>> by_student;

  void rebuild_index();
  std::size_t size() const { return events.size(); }
};

}  // namespace seqmine
