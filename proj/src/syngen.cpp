#include "seqmine/syngen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include "json.hpp"

#include "seqmine/patterns.hpp"

namespace seqmine::syngen {

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

double draw(const Discrete& dist, Rng& rng) {
  double total = 0.0;
  for (double w : dist.weights) total += w;
  const double u = rng.next_unit() * total;
  double cum = 0.0;
  for (std::size_t i = 0; i < dist.values.size(); ++i) {
    cum += dist.weights[i];
    if (u < cum) return dist.values[i];
  }
  return dist.values.back();
}

namespace {

std::size_t draw_index(const std::vector<double>& weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double u = rng.next_unit() * total;
  double cum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    cum += weights[i];
    if (u < cum) return i;
  }
  return weights.size() - 1;
}

EpochSeconds gap_seconds(double minutes) {
  return std::max<EpochSeconds>(1, std::llround(minutes * 60.0));
}

void check_discrete(const Discrete& dist, const std::string& name) {
  if (dist.values.empty() || dist.values.size() != dist.weights.size()) {
    throw Error(ErrorKind::InvalidProfile, name + ": values and weights must be non-empty and equal length");
  }
  double total = 0.0;
  for (double w : dist.weights) {
    if (w < 0.0) throw Error(ErrorKind::InvalidProfile, name + ": negative weight");
    total += w;
  }
  if (total <= 0.0) throw Error(ErrorKind::InvalidProfile, name + ": weights sum to zero");
}

void check_integral(const Discrete& dist, double min_value, const std::string& name) {
  for (double v : dist.values) {
    if (v != std::floor(v) || v < min_value) {
      throw Error(ErrorKind::InvalidProfile, name + ": values must be integers >= " +
                                                 std::to_string(static_cast<long long>(min_value)));
    }
  }
}

}  // namespace

void validate_profile(const BehaviorProfile& profile, double cutoff_minutes, bool noisy_gaps) {
  if (profile.platforms.empty()) {
    throw Error(ErrorKind::InvalidProfile, "profile has no platforms");
  }
  for (char c : profile.platforms) {
    if (c < 'A' || c > 'Z') {
      throw Error(ErrorKind::InvalidProfile, "platform letters must be uppercase A-Z");
    }
    if (std::count(profile.platforms.begin(), profile.platforms.end(), c) != 1) {
      throw Error(ErrorKind::InvalidProfile, "duplicate platform letter");
    }
  }
  const std::size_t k = profile.platforms.size();
  auto check_stochastic = [](const std::vector<double>& row, const std::string& name) {
    double sum = 0.0;
    for (double p : row) {
      if (p < 0.0) throw Error(ErrorKind::InvalidProfile, name + ": negative probability");
      sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-9) {
      throw Error(ErrorKind::InvalidProfile, name + ": probabilities sum to " + std::to_string(sum));
    }
  };
  if (profile.initial.size() != k) {
    throw Error(ErrorKind::InvalidProfile, "initial distribution size mismatch");
  }
  check_stochastic(profile.initial, "initial distribution");
  if (profile.transition.size() != k) {
    throw Error(ErrorKind::InvalidProfile, "transition matrix must be square over the platforms");
  }
  for (std::size_t r = 0; r < k; ++r) {
    if (profile.transition[r].size() != k) {
      throw Error(ErrorKind::InvalidProfile, "transition matrix must be square over the platforms");
    }
    check_stochastic(profile.transition[r],
                     std::string("transition row ") + profile.platforms[r]);
  }
  check_discrete(profile.actions_per_session, "actions_per_session");
  check_integral(profile.actions_per_session, 1.0, "actions_per_session");
  check_discrete(profile.sessions_per_student, "sessions_per_student");
  check_integral(profile.sessions_per_student, 0.0, "sessions_per_student");
  check_discrete(profile.intra_gap_minutes, "intra_gap_minutes");
  check_discrete(profile.inter_gap_minutes, "inter_gap_minutes");
  check_discrete(profile.grades, "grades");
  for (double g : profile.grades.values) {
    if (g < 0.0 || g > 100.0) {
      throw Error(ErrorKind::InvalidProfile, "grades must lie in [0, 100]");
    }
  }
  if (!noisy_gaps) {
    const double cutoff_seconds = cutoff_minutes * 60.0;
    for (double v : profile.intra_gap_minutes.values) {
      if (v < 0.0 || static_cast<double>(gap_seconds(v)) >= cutoff_seconds) {
        throw Error(ErrorKind::InvalidProfile,
                    "intra_gap_minutes support must stay strictly below the cutoff");
      }
    }
    for (double v : profile.inter_gap_minutes.values) {
      if (static_cast<double>(gap_seconds(v)) < cutoff_seconds) {
        throw Error(ErrorKind::InvalidProfile,
                    "inter_gap_minutes support must stay at or above the cutoff");
      }
    }
  }
}

namespace {

struct StudentPlan {
  std::string id;
  const BehaviorProfile* profile;
  double grade = 0.0;
};

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::UnwritableOutput, "cannot write '" + path.string() + "'");
  }
  return out;
}

}  // namespace

GeneratedClass generate_class(const GeneratorSpec& spec, std::uint64_t seed,
                              const std::string& out_dir) {
  if (spec.n_per_group < 1 || spec.n_per_group > 9999) {
    throw Error(ErrorKind::InvalidProfile, "n_per_group must be in 1..9999");
  }
  validate_profile(spec.group_a, spec.study_cutoff_minutes, spec.noisy_gaps);
  validate_profile(spec.group_b, spec.study_cutoff_minutes, spec.noisy_gaps);

  std::string alphabet = spec.group_a.platforms;
  for (char c : spec.group_b.platforms) {
    if (alphabet.find(c) == std::string::npos) alphabet += c;
  }
  std::sort(alphabet.begin(), alphabet.end());

  std::vector<StudentPlan> students;
  students.reserve(2 * spec.n_per_group);
  char idbuf[16];
  for (std::size_t i = 1; i <= spec.n_per_group; ++i) {
    std::snprintf(idbuf, sizeof idbuf, "a%04zu", i);
    students.push_back({idbuf, &spec.group_a});
  }
  for (std::size_t i = 1; i <= spec.n_per_group; ++i) {
    std::snprintf(idbuf, sizeof idbuf, "b%04zu", i);
    students.push_back({idbuf, &spec.group_b});
  }

  GeneratedClass result;
  result.platforms = alphabet;
  std::map<char, std::vector<EventRecord>> events_by_platform;
  for (char c : alphabet) events_by_platform[c];

  for (StudentPlan& student : students) {
    const BehaviorProfile& profile = *student.profile;
    // one stream per student: output is independent of student ordering
    Rng rng(seed ^ fnv1a64(student.id));
    student.grade = draw(profile.grades, rng);
    const auto n_sessions = static_cast<std::size_t>(draw(profile.sessions_per_student, rng));
    EpochSeconds t = spec.base_time;
    for (std::size_t s = 0; s < n_sessions; ++s) {
      t += gap_seconds(draw(profile.inter_gap_minutes, rng));
      const auto n_actions = static_cast<std::size_t>(draw(profile.actions_per_session, rng));
      ManifestSession manifest_session;
      manifest_session.student_id = student.id;
      manifest_session.index = s;
      manifest_session.start = t;
      manifest_session.n_events = n_actions;

      std::string letters;
      std::size_t platform_index = draw_index(profile.initial, rng);
      for (std::size_t a = 0; a < n_actions; ++a) {
        if (a > 0) {
          t += gap_seconds(draw(profile.intra_gap_minutes, rng));
          platform_index = draw_index(profile.transition[platform_index], rng);
        }
        const char letter = profile.platforms[platform_index];
        letters += letter;
        events_by_platform[letter].push_back({student.id, t, letter, "act", ""});
      }
      manifest_session.end = t;

      // compacted rendering of the generated letter sequence
      std::string sequence;
      std::size_t i = 0;
      while (i < letters.size()) {
        std::size_t j = i;
        while (j < letters.size() && letters[j] == letters[i]) ++j;
        sequence += letters[i];
        if (j - i >= 2) sequence += '+';
        i = j;
      }
      manifest_session.sequence = sequence;
      result.manifest.push_back(std::move(manifest_session));
    }
  }

  const std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorKind::UnwritableOutput, "cannot create '" + out_dir + "': " + ec.message());
  }

  for (char letter : alphabet) {
    const std::filesystem::path path = dir / (std::string("events_") + letter + ".csv");
    std::ofstream out = open_out(path);
    out << "student_id,timestamp,platform,action\n";
    for (const EventRecord& ev : events_by_platform[letter]) {
      out << ev.student_id << ',' << format_rfc3339(ev.timestamp) << ',' << ev.platform << ','
          << ev.action_kind << '\n';
    }
    result.event_files.push_back(path.string());
  }

  {
    const std::filesystem::path path = dir / "roster.csv";
    std::ofstream out = open_out(path);
    out << "student_id,grade\n";
    char line[64];
    for (const StudentPlan& student : students) {
      std::snprintf(line, sizeof line, "%s,%.2f\n", student.id.c_str(), student.grade);
      out << line;
    }
    result.roster_file = path.string();
  }

  {
    const std::filesystem::path path = dir / "manifest.jsonl";
    std::ofstream out = open_out(path);
    for (const ManifestSession& s : result.manifest) {
      nlohmann::json obj;
      obj["student"] = s.student_id;
      obj["index"] = s.index;
      obj["start"] = s.start;
      obj["end"] = s.end;
      obj["n_events"] = s.n_events;
      obj["sequence"] = s.sequence;
      out << obj.dump() << '\n';
    }
    result.manifest_file = path.string();
  }

  {
    const std::filesystem::path path = dir / "class_config.json";
    nlohmann::json cfg;
    nlohmann::json platforms = nlohmann::json::object();
    for (char c : alphabet) platforms[std::string(1, c)] = std::string(1, c);
    cfg["platforms"] = platforms;
    nlohmann::json sources = nlohmann::json::array();
    for (char c : alphabet) {
      nlohmann::json src;
      src["path"] = std::string("events_") + c + ".csv";
      src["format"] = "dsv";
      sources.push_back(src);
    }
    cfg["sources"] = sources;
    cfg["roster"] = "roster.csv";
    cfg["distinction_threshold"] = spec.distinction_threshold;
    cfg["browser_cutoff_minutes"] = spec.browser_cutoff_minutes;
    cfg["study_cutoff_minutes"] = spec.study_cutoff_minutes;
    std::ofstream out = open_out(path);
    out << cfg.dump(2) << '\n';
    result.config_file = path.string();
  }

  return result;
}

std::vector<ManifestSession> load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::IoError, "cannot open manifest '" + path + "'");
  }
  std::vector<ManifestSession> manifest;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded()) {
      throw Error(ErrorKind::MalformedRow,
                  path + ":" + std::to_string(line_no) + ": not a JSON object");
    }
    ManifestSession s;
    s.student_id = obj.at("student").get<std::string>();
    s.index = obj.at("index").get<std::size_t>();
    s.start = obj.at("start").get<EpochSeconds>();
    s.end = obj.at("end").get<EpochSeconds>();
    s.n_events = obj.at("n_events").get<std::size_t>();
    s.sequence = obj.at("sequence").get<std::string>();
    manifest.push_back(std::move(s));
  }
  return manifest;
}

RoundtripReport verify_roundtrip(const std::vector<ManifestSession>& manifest,
                                 const std::vector<session::Session>& recovered) {
  RoundtripReport report;
  std::map<std::string, std::vector<const ManifestSession*>> expected;
  for (const ManifestSession& s : manifest) expected[s.student_id].push_back(&s);

  std::map<std::string, std::vector<const session::Session*>> actual;
  for (const session::Session& s : recovered) actual[s.student_id].push_back(&s);

  for (const auto& [student, expected_sessions] : expected) {
    ++report.students_checked;
    auto it = actual.find(student);
    const std::size_t actual_count = it == actual.end() ? 0 : it->second.size();
    if (actual_count != expected_sessions.size()) {
      report.divergences.push_back(student + ": expected " +
                                   std::to_string(expected_sessions.size()) + " sessions, got " +
                                   std::to_string(actual_count));
      continue;
    }
    for (std::size_t i = 0; i < expected_sessions.size(); ++i) {
      ++report.sessions_checked;
      const ManifestSession& want = *expected_sessions[i];
      const session::Session& got = *it->second[i];
      if (got.start != want.start || got.end != want.end ||
          got.events.size() != want.n_events) {
        report.divergences.push_back(
            student + "[" + std::to_string(i) + "]: boundary mismatch, expected [" +
            format_rfc3339(want.start) + ", " + format_rfc3339(want.end) + "] x" +
            std::to_string(want.n_events) + ", got [" + format_rfc3339(got.start) + ", " +
            format_rfc3339(got.end) + "] x" + std::to_string(got.events.size()));
        continue;
      }
      const std::string got_sequence = patterns::to_string(patterns::compact(got, i).tokens);
      if (got_sequence != want.sequence) {
        report.divergences.push_back(student + "[" + std::to_string(i) +
                                     "]: sequence mismatch, expected '" + want.sequence +
                                     "', got '" + got_sequence + "'");
      }
    }
  }
  for (const auto& [student, sessions] : actual) {
    if (!expected.count(student)) {
      report.divergences.push_back(student + ": " + std::to_string(sessions.size()) +
                                   " sessions not in the manifest");
    }
  }
  return report;
}

}  // namespace seqmine::syngen
