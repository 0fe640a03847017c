#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "seqmine/core.hpp"

// Per-source log parsing, the deterministic class-level merge, roster
// loading and cohort filtering.

namespace seqmine::ingest {

enum class SourceFormat { Dsv, Jsonl };

// Describes how to read one source log file. Dsv files need a header row;
// field names address header columns (Dsv) or object keys (Jsonl).
// Timestamps may be RFC 3339 or integer epoch seconds, auto-detected from
// the first data row of each file.
struct SourceSchema {
  std::string path;
  SourceFormat format = SourceFormat::Dsv;
  char delimiter = ',';
  std::string id_field = "student_id";
  std::string timestamp_field = "timestamp";
  std::string platform_field = "platform";
  std::string action_field = "action";
  // When non-empty the whole file is attributed to this platform name and
  // the platform column becomes optional (single-platform logs).
  std::string fixed_platform;
  std::string source_tag;  // defaults to the file name
};

// Maps source log platform names (e.g. "piazza") to class alphabet letters.
using PlatformMap = std::map<std::string, char>;

std::vector<EventRecord> parse_log(const SourceSchema& schema, const PlatformMap& platform_map);

// Merges per-source event lists into one time-sorted stream. Ties are broken
// by (timestamp, source_tag, input order); the result is deterministic.
TransactionStream merge_logs(const std::vector<std::vector<EventRecord>>& sources);

std::vector<RosterEntry> load_roster(const std::string& path, double distinction_threshold = 90.0,
                                     char delimiter = ',');

// Drops every event whose student id is in `exclude`; surviving order is
// unchanged.
TransactionStream filter_students(const TransactionStream& stream,
                                  const std::set<std::string>& exclude);

}  // namespace seqmine::ingest
