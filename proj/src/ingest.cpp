#include "seqmine/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace seqmine::ingest {

namespace {

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_row(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(delimiter, start);
    if (pos == std::string::npos) {
      fields.push_back(trimmed(line.substr(start)));
      break;
    }
    fields.push_back(trimmed(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return fields;
}

std::string default_tag(const SourceSchema& schema) {
  if (!schema.source_tag.empty()) return schema.source_tag;
  return std::filesystem::path(schema.path).filename().string();
}

enum class TimestampMode { Unknown, Rfc3339, Epoch };

EpochSeconds parse_timestamp(const std::string& text, TimestampMode& mode,
                             const std::string& file, std::size_t line_no) {
  if (mode == TimestampMode::Unknown) {
    if (parse_epoch(text)) {
      mode = TimestampMode::Epoch;
    } else if (parse_rfc3339(text)) {
      mode = TimestampMode::Rfc3339;
    }
  }
  std::optional<EpochSeconds> t;
  if (mode == TimestampMode::Epoch) t = parse_epoch(text);
  if (mode == TimestampMode::Rfc3339) t = parse_rfc3339(text);
  if (!t) {
    throw Error(ErrorKind::MalformedRow,
                file + ":" + std::to_string(line_no) + ": unparsable timestamp '" + text + "'");
  }
  return *t;
}

char lookup_platform(const std::string& name, const PlatformMap& platform_map,
                     const std::string& file, std::size_t line_no) {
  auto it = platform_map.find(name);
  if (it == platform_map.end()) {
    throw Error(ErrorKind::UnknownPlatform,
                file + ":" + std::to_string(line_no) + ": platform '" + name +
                    "' is not in the class platform map");
  }
  return it->second;
}

std::vector<EventRecord> parse_dsv(const SourceSchema& schema, const PlatformMap& platform_map,
                                   std::ifstream& in) {
  const std::string tag = default_tag(schema);
  std::vector<EventRecord> events;
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) return events;  // empty file
  ++line_no;
  const std::vector<std::string> header = split_row(line, schema.delimiter);
  auto column = [&](const std::string& name, bool required) -> std::ptrdiff_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      if (required) {
        throw Error(ErrorKind::MalformedRow,
                    schema.path + ":1: header is missing column '" + name + "'");
      }
      return -1;
    }
    return it - header.begin();
  };
  const std::ptrdiff_t id_col = column(schema.id_field, true);
  const std::ptrdiff_t ts_col = column(schema.timestamp_field, true);
  const std::ptrdiff_t pl_col = column(schema.platform_field, schema.fixed_platform.empty());
  const std::ptrdiff_t ac_col = column(schema.action_field, true);

  TimestampMode mode = TimestampMode::Unknown;
  while (std::getline(in, line)) {
    ++line_no;
    if (trimmed(line).empty()) continue;
    const std::vector<std::string> fields = split_row(line, schema.delimiter);
    if (fields.size() != header.size()) {
      throw Error(ErrorKind::MalformedRow,
                  schema.path + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    EventRecord ev;
    ev.student_id = fields[id_col];
    if (ev.student_id.empty()) {
      throw Error(ErrorKind::MalformedRow,
                  schema.path + ":" + std::to_string(line_no) + ": empty student id");
    }
    ev.timestamp = parse_timestamp(fields[ts_col], mode, schema.path, line_no);
    const std::string& platform_name =
        schema.fixed_platform.empty() ? fields[pl_col] : schema.fixed_platform;
    ev.platform = lookup_platform(platform_name, platform_map, schema.path, line_no);
    ev.action_kind = fields[ac_col];
    ev.source_tag = tag;
    events.push_back(std::move(ev));
  }
  return events;
}

std::vector<EventRecord> parse_jsonl(const SourceSchema& schema, const PlatformMap& platform_map,
                                     std::ifstream& in) {
  const std::string tag = default_tag(schema);
  std::vector<EventRecord> events;
  std::string line;
  std::size_t line_no = 0;
  TimestampMode mode = TimestampMode::Unknown;
  while (std::getline(in, line)) {
    ++line_no;
    if (trimmed(line).empty()) continue;
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      throw Error(ErrorKind::MalformedRow,
                  schema.path + ":" + std::to_string(line_no) + ": not a JSON object");
    }
    auto field = [&](const std::string& name) -> std::string {
      if (!obj.contains(name)) {
        throw Error(ErrorKind::MalformedRow, schema.path + ":" + std::to_string(line_no) +
                                                 ": missing field '" + name + "'");
      }
      const auto& v = obj.at(name);
      if (v.is_string()) return v.get<std::string>();
      if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
      throw Error(ErrorKind::MalformedRow, schema.path + ":" + std::to_string(line_no) +
                                               ": field '" + name + "' must be string or integer");
    };
    EventRecord ev;
    ev.student_id = field(schema.id_field);
    if (ev.student_id.empty()) {
      throw Error(ErrorKind::MalformedRow,
                  schema.path + ":" + std::to_string(line_no) + ": empty student id");
    }
    ev.timestamp = parse_timestamp(field(schema.timestamp_field), mode, schema.path, line_no);
    const std::string platform_name =
        schema.fixed_platform.empty() ? field(schema.platform_field) : schema.fixed_platform;
    ev.platform = lookup_platform(platform_name, platform_map, schema.path, line_no);
    ev.action_kind = field(schema.action_field);
    ev.source_tag = tag;
    events.push_back(std::move(ev));
  }
  return events;
}

}  // namespace

std::vector<EventRecord> parse_log(const SourceSchema& schema, const PlatformMap& platform_map) {
  std::ifstream in(schema.path);
  if (!in) {
    throw Error(ErrorKind::IoError, "cannot open source log '" + schema.path + "'");
  }
  if (schema.format == SourceFormat::Dsv) return parse_dsv(schema, platform_map, in);
  return parse_jsonl(schema, platform_map, in);
}

TransactionStream merge_logs(const std::vector<std::vector<EventRecord>>& sources) {
  TransactionStream stream;
  std::size_t total = 0;
  for (const auto& src : sources) total += src.size();
  stream.events.reserve(total);
  for (const auto& src : sources) {
    stream.events.insert(stream.events.end(), src.begin(), src.end());
  }
  // stable sort keeps input order for full (timestamp, source_tag) ties
  std::stable_sort(stream.events.begin(), stream.events.end(),
                   [](const EventRecord& a, const EventRecord& b) {
                     if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
                     return a.source_tag < b.source_tag;
                   });
  stream.rebuild_index();
  return stream;
}

std::vector<RosterEntry> load_roster(const std::string& path, double distinction_threshold,
                                     char delimiter) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::IoError, "cannot open roster '" + path + "'");
  }
  std::vector<RosterEntry> roster;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) return roster;
  ++line_no;
  const std::vector<std::string> header = split_row(line, delimiter);
  auto find_col = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw Error(ErrorKind::MalformedRow, path + ":1: header is missing column '" + name + "'");
    }
    return it - header.begin();
  };
  const std::ptrdiff_t id_col = find_col("student_id");
  const std::ptrdiff_t grade_col = find_col("grade");

  while (std::getline(in, line)) {
    ++line_no;
    if (trimmed(line).empty()) continue;
    const std::vector<std::string> fields = split_row(line, delimiter);
    if (fields.size() != header.size()) {
      throw Error(ErrorKind::MalformedRow,
                  path + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    RosterEntry entry;
    entry.student_id = fields[id_col];
    if (entry.student_id.empty()) {
      throw Error(ErrorKind::MalformedRow, path + ":" + std::to_string(line_no) + ": empty student id");
    }
    const std::string& grade_text = fields[grade_col];
    double grade = 0.0;
    auto [ptr, ec] = std::from_chars(grade_text.data(), grade_text.data() + grade_text.size(), grade);
    if (ec != std::errc() || ptr != grade_text.data() + grade_text.size()) {
      throw Error(ErrorKind::MalformedRow,
                  path + ":" + std::to_string(line_no) + ": unparsable grade '" + grade_text + "'");
    }
    if (grade < 0.0 || grade > 100.0) {
      throw Error(ErrorKind::MalformedRow,
                  path + ":" + std::to_string(line_no) + ": grade out of [0, 100]");
    }
    entry.final_grade = grade;
    entry.group = grade >= distinction_threshold ? Group::Distinction : Group::NonDistinction;
    if (!seen.insert(entry.student_id).second) {
      throw Error(ErrorKind::DuplicateStudent,
                  path + ":" + std::to_string(line_no) + ": duplicate student '" +
                      entry.student_id + "'");
    }
    roster.push_back(std::move(entry));
  }
  return roster;
}

TransactionStream filter_students(const TransactionStream& stream,
                                  const std::set<std::string>& exclude) {
  TransactionStream out;
  out.events.reserve(stream.events.size());
  for (const auto& ev : stream.events) {
    if (!exclude.count(ev.student_id)) out.events.push_back(ev);
  }
  out.rebuild_index();
  return out;
}

}  // namespace seqmine::ingest
