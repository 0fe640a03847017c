#include "doctest.h"

#include <filesystem>

#include "seqmine/ingest.hpp"

#include "oracles.hpp"

using namespace seqmine;
using oracles::write_file;

namespace {

const ingest::PlatformMap kMap = {{"piazza", 'P'}, {"moodle", 'M'}, {"webassign", 'W'}};

std::string tmp_path(const std::string& name) {
  std::filesystem::create_directories("test_tmp");
  return "test_tmp/" + name;
}

}  // namespace

TEST_CASE("parse_log maps a well-formed dsv row") {
  const std::string path = tmp_path("basic.csv");
  write_file(path, "student_id,timestamp,platform,action\ns1,2015-09-01T10:00:00Z,piazza,post\n");
  ingest::SourceSchema schema;
  schema.path = path;
  const auto events = ingest::parse_log(schema, kMap);
  REQUIRE(events.size() == 1);
  CHECK(events[0].student_id == "s1");
  CHECK(events[0].timestamp == *parse_rfc3339("2015-09-01T10:00:00Z"));
  CHECK(events[0].platform == 'P');
  CHECK(events[0].action_kind == "post");
  CHECK(events[0].source_tag == "basic.csv");
}

TEST_CASE("parse_log on an empty file yields an empty list") {
  const std::string path = tmp_path("empty.csv");
  write_file(path, "");
  ingest::SourceSchema schema;
  schema.path = path;
  CHECK(ingest::parse_log(schema, kMap).empty());
}

TEST_CASE("parse_log rejects an unparsable timestamp with its line number") {
  const std::string path = tmp_path("badtime.csv");
  write_file(path, "student_id,timestamp,platform,action\ns1,not-a-time,piazza,post\n");
  ingest::SourceSchema schema;
  schema.path = path;
  try {
    ingest::parse_log(schema, kMap);
    FAIL("expected MalformedRow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MalformedRow);
    CHECK(std::string(e.what()).find(":2") != std::string::npos);  // first data row
  }
}

TEST_CASE("parse_log rejects platforms outside the class map") {
  const std::string path = tmp_path("badplatform.csv");
  write_file(path, "student_id,timestamp,platform,action\ns1,2015-09-01T10:00:00Z,github,push\n");
  ingest::SourceSchema schema;
  schema.path = path;
  CHECK_THROWS_AS(ingest::parse_log(schema, kMap), Error);
  try {
    ingest::parse_log(schema, kMap);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownPlatform);
  }
}

TEST_CASE("parse_log auto-detects epoch-second timestamps per file") {
  const std::string path = tmp_path("epoch.csv");
  write_file(path, "student_id,timestamp,platform,action\ns1,1441101600,piazza,post\n");
  ingest::SourceSchema schema;
  schema.path = path;
  const auto events = ingest::parse_log(schema, kMap);
  REQUIRE(events.size() == 1);
  CHECK(events[0].timestamp == 1441101600);
}

TEST_CASE("parse_log truncates sub-second precision") {
  const std::string path = tmp_path("frac.csv");
  write_file(path,
             "student_id,timestamp,platform,action\ns1,2015-09-01T10:00:00.750Z,piazza,post\n");
  ingest::SourceSchema schema;
  schema.path = path;
  const auto events = ingest::parse_log(schema, kMap);
  REQUIRE(events.size() == 1);
  CHECK(events[0].timestamp == *parse_rfc3339("2015-09-01T10:00:00Z"));
}

TEST_CASE("parse_log reads jsonl sources and fixed-platform files") {
  const std::string path = tmp_path("log.jsonl");
  write_file(path,
             "{\"student_id\":\"s1\",\"timestamp\":\"2015-09-01T10:00:00Z\",\"action\":\"view\"}\n"
             "{\"student_id\":\"s2\",\"timestamp\":\"2015-09-01T11:00:00Z\",\"action\":\"post\"}\n");
  ingest::SourceSchema schema;
  schema.path = path;
  schema.format = ingest::SourceFormat::Jsonl;
  schema.fixed_platform = "moodle";
  const auto events = ingest::parse_log(schema, kMap);
  REQUIRE(events.size() == 2);
  CHECK(events[0].platform == 'M');
  CHECK(events[1].platform == 'M');
  CHECK(events[1].timestamp == *parse_rfc3339("2015-09-01T11:00:00Z"));
}

TEST_CASE("parse_log holds one timestamp format per file") {
  // first data row is RFC 3339, so a later epoch value is malformed
  const std::string path = tmp_path("mixed_time.csv");
  write_file(path,
             "student_id,timestamp,platform,action\n"
             "s1,2015-09-01T10:00:00Z,piazza,post\n"
             "s2,1441101600,piazza,post\n");
  ingest::SourceSchema schema;
  schema.path = path;
  CHECK_THROWS_AS(ingest::parse_log(schema, kMap), Error);
}

TEST_CASE("merge_logs sorts across sources") {
  std::vector<EventRecord> src_a = {{"s1", 5, 'P', "post", "a"}};
  std::vector<EventRecord> src_b = {{"s2", 3, 'M', "view", "b"}};
  const auto stream = ingest::merge_logs({src_a, src_b});
  REQUIRE(stream.events.size() == 2);
  CHECK(stream.events[0].timestamp == 3);
  CHECK(stream.events[1].timestamp == 5);
}

TEST_CASE("merge_logs on one sorted source is the identity") {
  std::vector<EventRecord> src = {{"s1", 1, 'P', "a", "x"}, {"s1", 2, 'M', "b", "x"}};
  const auto stream = ingest::merge_logs({src});
  REQUIRE(stream.events.size() == 2);
  CHECK(stream.events[0].action_kind == "a");
  CHECK(stream.events[1].action_kind == "b");
}

TEST_CASE("merge_logs equals the brute-force sort oracle on random sources") {
  syngen::Rng rng(20250901);
  for (int round = 0; round < 5; ++round) {
    std::vector<std::vector<EventRecord>> sources;
    for (int s = 0; s < 3; ++s) {
      std::vector<EventRecord> src;
      for (int i = 0; i < 100; ++i) {
        src.push_back({"s" + std::to_string(rng.next_u64() % 7),
                       static_cast<EpochSeconds>(rng.next_u64() % 1000), 'M', "act",
                       "src" + std::to_string(s)});
      }
      sources.push_back(std::move(src));
    }
    const auto stream = ingest::merge_logs(sources);
    const auto expected = oracles::merge_brute(sources);
    REQUIRE(stream.events.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      CHECK(stream.events[i].timestamp == expected[i].timestamp);
      CHECK(stream.events[i].source_tag == expected[i].source_tag);
      CHECK(stream.events[i].student_id == expected[i].student_id);
    }
    // multiset equality: sort both by every field and compare
    auto key = [](const EventRecord& e) {
      return std::tuple(e.timestamp, e.student_id, e.source_tag, e.action_kind);
    };
    std::vector<EventRecord> lhs = stream.events, rhs;
    for (const auto& src : sources) rhs.insert(rhs.end(), src.begin(), src.end());
    std::sort(lhs.begin(), lhs.end(), [&](auto& a, auto& b) { return key(a) < key(b); });
    std::sort(rhs.begin(), rhs.end(), [&](auto& a, auto& b) { return key(a) < key(b); });
    REQUIRE(lhs.size() == rhs.size());
    for (std::size_t i = 0; i < lhs.size(); ++i) CHECK(key(lhs[i]) == key(rhs[i]));
  }
}

TEST_CASE("merge_logs is deterministic") {
  syngen::Rng rng(7);
  std::vector<std::vector<EventRecord>> sources(2);
  for (int i = 0; i < 50; ++i) {
    sources[i % 2].push_back({"s1", static_cast<EpochSeconds>(rng.next_u64() % 10), 'M',
                              "act" + std::to_string(i), "tag"});
  }
  const auto first = ingest::merge_logs(sources);
  const auto second = ingest::merge_logs(sources);
  REQUIRE(first.events.size() == second.events.size());
  for (std::size_t i = 0; i < first.events.size(); ++i) {
    CHECK(first.events[i].action_kind == second.events[i].action_kind);
  }
}

TEST_CASE("merge_logs indexes students with time-ordered sublists") {
  std::vector<EventRecord> src = {{"s2", 9, 'M', "a", "x"},
                                  {"s1", 4, 'M', "b", "x"},
                                  {"s2", 1, 'M', "c", "x"},
                                  {"s1", 2, 'M', "d", "x"}};
  const auto stream = ingest::merge_logs({src});
  REQUIRE(stream.by_student.size() == 2);
  for (const auto& [student, positions] : stream.by_student) {
    for (std::size_t i = 0; i + 1 < positions.size(); ++i) {
      CHECK(stream.events[positions[i]].timestamp <= stream.events[positions[i + 1]].timestamp);
      CHECK(stream.events[positions[i]].student_id == student);
    }
  }
}

TEST_CASE("load_roster applies the distinction threshold at the boundary") {
  const std::string path = tmp_path("roster.csv");
  write_file(path, "student_id,grade\ns1,90\ns2,89.9\ns3,95\ns4,88\ns5,60\n");
  const auto roster = ingest::load_roster(path, 90.0);
  REQUIRE(roster.size() == 5);
  CHECK(roster[0].group == Group::Distinction);      // 90 -> A- or above
  CHECK(roster[1].group == Group::NonDistinction);   // 89.9
  CHECK(roster[2].group == Group::Distinction);      // 95
  CHECK(roster[3].group == Group::NonDistinction);   // 88
  CHECK(roster[4].group == Group::NonDistinction);   // 60
  // total partition: every entry in exactly one group
  for (const auto& entry : roster) {
    CHECK((entry.group == Group::Distinction) ==
          (entry.final_grade >= 90.0));
  }
}

TEST_CASE("load_roster rejects duplicates and malformed grades") {
  const std::string dup = tmp_path("roster_dup.csv");
  write_file(dup, "student_id,grade\ns1,90\ns1,80\n");
  try {
    ingest::load_roster(dup);
    FAIL("expected DuplicateStudent");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DuplicateStudent);
  }
  const std::string bad = tmp_path("roster_bad.csv");
  write_file(bad, "student_id,grade\ns1,ninety\n");
  CHECK_THROWS_AS(ingest::load_roster(bad), Error);
  const std::string range = tmp_path("roster_range.csv");
  write_file(range, "student_id,grade\ns1,105\n");
  CHECK_THROWS_AS(ingest::load_roster(range), Error);
}

TEST_CASE("filter_students drops exactly the excluded ids in place") {
  std::vector<EventRecord> src = {{"a", 1, 'M', "1", "x"},
                                  {"b", 2, 'M', "2", "x"},
                                  {"c", 3, 'M', "3", "x"},
                                  {"b", 4, 'M', "4", "x"}};
  const auto stream = ingest::merge_logs({src});

  const auto untouched = ingest::filter_students(stream, {});
  CHECK(untouched.events.size() == 4);

  const auto none = ingest::filter_students(stream, {"a", "b", "c"});
  CHECK(none.events.empty());

  const auto filtered = ingest::filter_students(stream, {"b"});
  REQUIRE(filtered.events.size() == 2);
  CHECK(filtered.events[0].student_id == "a");
  CHECK(filtered.events[1].student_id == "c");
  CHECK(filtered.by_student.count("b") == 0);
}
