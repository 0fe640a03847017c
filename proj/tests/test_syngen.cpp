#include "doctest.h"

#include <filesystem>
#include <map>

#include "seqmine/config.hpp"
#include "seqmine/report.hpp"
#include "seqmine/sessionize.hpp"
#include "seqmine/syngen.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace seqmine;

namespace {

std::string fresh_dir(const std::string& name) {
  const std::string dir = "test_tmp/" + name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("generate_class is byte-identical for a fixed seed") {
  const auto spec = fixtures::spec(0.15, 0.02, 5);
  const auto first = syngen::generate_class(spec, 7, fresh_dir("gen_a"));
  const auto second = syngen::generate_class(spec, 7, fresh_dir("gen_b"));
  REQUIRE(first.event_files.size() == second.event_files.size());
  for (std::size_t i = 0; i < first.event_files.size(); ++i) {
    CHECK(oracles::read_file(first.event_files[i]) == oracles::read_file(second.event_files[i]));
  }
  CHECK(oracles::read_file(first.roster_file) == oracles::read_file(second.roster_file));
  CHECK(oracles::read_file(first.manifest_file) == oracles::read_file(second.manifest_file));
  CHECK(oracles::read_file(first.config_file) == oracles::read_file(second.config_file));

  // a different seed moves the data
  const auto third = syngen::generate_class(spec, 8, fresh_dir("gen_c"));
  CHECK(oracles::read_file(first.manifest_file) != oracles::read_file(third.manifest_file));
}

TEST_CASE("generate_class rejects n_per_group = 0") {
  const auto spec = fixtures::spec(0.15, 0.02, 0);
  try {
    syngen::generate_class(spec, 1, fresh_dir("gen_zero"));
    FAIL("expected InvalidProfile");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidProfile);
  }
}

TEST_CASE("identity transitions with three actions compact to a single repeated token") {
  auto spec = fixtures::spec(0.15, 0.02, 4);
  for (auto* profile : {&spec.group_a, &spec.group_b}) {
    for (std::size_t r = 0; r < profile->transition.size(); ++r) {
      for (std::size_t c = 0; c < profile->transition[r].size(); ++c) {
        profile->transition[r][c] = r == c ? 1.0 : 0.0;
      }
    }
    profile->actions_per_session = {{3}, {1.0}};
  }
  const auto generated = syngen::generate_class(spec, 11, fresh_dir("gen_identity"));
  REQUIRE(!generated.manifest.empty());
  for (const auto& session : generated.manifest) {
    CHECK(session.n_events == 3);
    REQUIRE(session.sequence.size() == 2);
    CHECK(session.sequence[1] == '+');
  }
}

TEST_CASE("validate_profile rejects broken profiles") {
  const double cutoff = 40.0;
  auto good = fixtures::profile(0.15, true);
  CHECK_NOTHROW(syngen::validate_profile(good, cutoff));

  auto bad_row = good;
  bad_row.transition[0][0] += 0.1;
  CHECK_THROWS_AS(syngen::validate_profile(bad_row, cutoff), Error);

  auto bad_initial = good;
  bad_initial.initial[0] += 1e-6;
  CHECK_THROWS_AS(syngen::validate_profile(bad_initial, cutoff), Error);

  auto bad_intra = good;
  bad_intra.intra_gap_minutes.values.push_back(45.0);  // above the cutoff
  bad_intra.intra_gap_minutes.weights.push_back(0.1);
  CHECK_THROWS_AS(syngen::validate_profile(bad_intra, cutoff), Error);

  auto bad_inter = good;
  bad_inter.inter_gap_minutes.values.push_back(10.0);  // below the cutoff
  bad_inter.inter_gap_minutes.weights.push_back(0.1);
  CHECK_THROWS_AS(syngen::validate_profile(bad_inter, cutoff), Error);
  // noisy-gaps mode skips only the separation checks
  CHECK_NOTHROW(syngen::validate_profile(bad_inter, cutoff, true));

  auto bad_grade = good;
  bad_grade.grades.values.push_back(120.0);
  bad_grade.grades.weights.push_back(0.1);
  CHECK_THROWS_AS(syngen::validate_profile(bad_grade, cutoff), Error);

  auto bad_actions = good;
  bad_actions.actions_per_session.values.push_back(2.5);
  bad_actions.actions_per_session.weights.push_back(0.1);
  CHECK_THROWS_AS(syngen::validate_profile(bad_actions, cutoff), Error);
}

TEST_CASE("generated event streams are time-sorted per student") {
  const auto spec = fixtures::spec(0.15, 0.02, 6);
  const auto generated = syngen::generate_class(spec, 21, fresh_dir("gen_sorted"));
  const auto cfg = config::load_class_config(generated.config_file);
  const auto stream = report::ingest_stage(cfg);
  for (const auto& [student, positions] : stream.by_student) {
    for (std::size_t i = 0; i + 1 < positions.size(); ++i) {
      CHECK(stream.events[positions[i]].timestamp < stream.events[positions[i + 1]].timestamp);
    }
  }
}

TEST_CASE("empirical transition frequencies converge to the profile matrix") {
  auto spec = fixtures::spec(0.15, 0.15, 50);
  spec.group_b = spec.group_a;  // one shared matrix, 10k transitions
  spec.group_a.actions_per_session = {{6}, {1.0}};
  spec.group_b.actions_per_session = {{6}, {1.0}};
  spec.group_a.sessions_per_student = {{20}, {1.0}};
  spec.group_b.sessions_per_student = {{20}, {1.0}};
  const auto generated = syngen::generate_class(spec, 99, fresh_dir("gen_freq"));

  const auto cfg = config::load_class_config(generated.config_file);
  const auto stream = report::ingest_stage(cfg);
  const auto sessions = session::build_sessions(stream, 40.0);

  const std::string& platforms = spec.group_a.platforms;
  std::map<char, std::map<char, double>> counts;
  std::map<char, double> row_totals;
  std::size_t transitions = 0;
  for (const auto& s : sessions) {
    for (std::size_t i = 0; i + 1 < s.events.size(); ++i) {
      counts[s.events[i].platform][s.events[i + 1].platform] += 1.0;
      row_totals[s.events[i].platform] += 1.0;
      ++transitions;
    }
  }
  REQUIRE(transitions >= 10000);
  for (std::size_t r = 0; r < platforms.size(); ++r) {
    for (std::size_t c = 0; c < platforms.size(); ++c) {
      const double expected = spec.group_a.transition[r][c];
      const double observed = counts[platforms[r]][platforms[c]] / row_totals[platforms[r]];
      CHECK(std::fabs(observed - expected) < 0.02);
    }
  }
}

TEST_CASE("roundtrip: sessionization recovers the generated structure exactly") {
  const auto spec = fixtures::spec(0.15, 0.02, 10);
  const auto generated = syngen::generate_class(spec, 77, fresh_dir("gen_roundtrip"));
  const auto cfg = config::load_class_config(generated.config_file);
  const auto stream = report::ingest_stage(cfg);
  const auto sessions = session::build_sessions(stream, cfg.study_cutoff_minutes);

  const auto report = syngen::verify_roundtrip(generated.manifest, sessions);
  CHECK(report.clean());
  CHECK(report.sessions_checked == generated.manifest.size());

  // manifest reloaded from disk tells the same story
  const auto reloaded = syngen::load_manifest(generated.manifest_file);
  REQUIRE(reloaded.size() == generated.manifest.size());
  const auto report2 = syngen::verify_roundtrip(reloaded, sessions);
  CHECK(report2.clean());
}

TEST_CASE("a cutoff below the intra-session gaps breaks the roundtrip visibly") {
  const auto spec = fixtures::spec(0.15, 0.02, 10);
  const auto generated = syngen::generate_class(spec, 77, fresh_dir("gen_broken"));
  const auto cfg = config::load_class_config(generated.config_file);
  const auto stream = report::ingest_stage(cfg);
  // 5 < max intra gap of 10 minutes: long sessions split apart
  const auto sessions = session::build_sessions(stream, 5.0);
  const auto report = syngen::verify_roundtrip(generated.manifest, sessions);
  CHECK_FALSE(report.clean());
}
