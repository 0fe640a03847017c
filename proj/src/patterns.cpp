#include "seqmine/patterns.hpp"

#include <algorithm>
#include <cctype>

namespace seqmine::patterns {

std::string to_string(const Token& token) {
  std::string s(1, token.platform);
  if (token.repeated) s += '+';
  return s;
}

std::string to_string(const Pattern& pattern) {
  std::string s;
  for (const Token& t : pattern) s += to_string(t);
  return s;
}

const char* to_string(SupportMode mode) {
  return mode == SupportMode::ExactSession ? "exact" : "contain";
}

CompactedSequence compact(const session::Session& s, std::size_t session_index) {
  if (s.events.empty()) {
    throw Error(ErrorKind::EmptySession, "cannot compact a session with no events");
  }
  CompactedSequence seq;
  seq.student_id = s.student_id;
  seq.session_index = session_index;
  std::size_t run = 0;
  char run_platform = 0;
  for (const EventRecord& ev : s.events) {
    if (run > 0 && ev.platform == run_platform) {
      ++run;
      continue;
    }
    if (run > 0) seq.tokens.push_back({run_platform, run >= 2});
    run_platform = ev.platform;
    run = 1;
  }
  seq.tokens.push_back({run_platform, run >= 2});
  return seq;
}

std::map<std::string, std::vector<CompactedSequence>> compact_by_student(
    const std::vector<session::Session>& sessions) {
  std::map<std::string, std::vector<CompactedSequence>> out;
  for (const session::Session& s : sessions) {
    auto& list = out[s.student_id];
    list.push_back(compact(s, list.size()));
  }
  return out;
}

namespace {

void check_pattern_shape(const Pattern& pattern, std::size_t max_len) {
  if (pattern.empty() || pattern.size() > max_len) {
    throw Error(ErrorKind::BadPattern, "pattern '" + to_string(pattern) + "' must have 1.." +
                                           std::to_string(max_len) + " tokens");
  }
  for (std::size_t i = 0; i + 1 < pattern.size(); ++i) {
    if (pattern[i].platform == pattern[i + 1].platform) {
      throw Error(ErrorKind::BadPattern, "pattern '" + to_string(pattern) +
                                             "' has adjacent tokens on the same platform");
    }
  }
}

char parse_letter(char c, const std::string& alphabet, const std::string& context) {
  const char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (alphabet.find(u) == std::string::npos) {
    throw Error(ErrorKind::BadPattern, context + ": platform '" + std::string(1, c) +
                                           "' is not in the class alphabet '" + alphabet + "'");
  }
  return u;
}

}  // namespace

Target make_literal(const Pattern& pattern) {
  Target t;
  t.name = to_string(pattern);
  t.kind = FamilyKind::Literal;
  t.members.push_back(pattern);
  return t;
}

Target make_transition_pair(char a, char b, bool extended) {
  if (a == b) {
    throw Error(ErrorKind::BadPattern, "transition pair needs two distinct platforms");
  }
  Target t;
  t.name = std::string("trans(") + a + "," + b + ")";
  t.kind = FamilyKind::TransitionPair;
  t.members.push_back({{a, true}, {b, false}});   // A+B
  t.members.push_back({{b, true}, {a, false}});   // B+A
  t.members.push_back({{a, false}, {b, false}});  // AB
  t.members.push_back({{b, false}, {a, false}});  // BA
  if (extended) {
    t.members.push_back({{a, false}, {b, true}});  // AB+
    t.members.push_back({{b, false}, {a, true}});  // BA+
    t.members.push_back({{a, true}, {b, true}});   // A+B+
    t.members.push_back({{b, true}, {a, true}});   // B+A+
  }
  return t;
}

Target make_repeat_then(char platform) {
  Target t;
  t.name = std::string("+") + platform;
  t.kind = FamilyKind::RepeatThen;
  t.wildcard_platform = platform;
  return t;
}

Pattern parse_pattern(const std::string& text, const std::string& alphabet, std::size_t max_len) {
  Pattern pattern;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '+') {
      throw Error(ErrorKind::BadPattern, "'" + text + "': '+' must follow a platform letter");
    }
    Token token;
    token.platform = parse_letter(c, alphabet, "'" + text + "'");
    if (i + 1 < text.size() && text[i + 1] == '+') {
      token.repeated = true;
      ++i;
    }
    pattern.push_back(token);
  }
  check_pattern_shape(pattern, max_len);
  return pattern;
}

Target parse_target(const std::string& text, const std::string& alphabet, bool extended_families,
                    std::size_t max_len) {
  if (text.empty()) {
    throw Error(ErrorKind::BadPattern, "empty target");
  }
  if (text[0] == '+') {
    if (text.size() != 2) {
      throw Error(ErrorKind::BadPattern, "'" + text + "': wildcard form is '+X'");
    }
    return make_repeat_then(parse_letter(text[1], alphabet, "'" + text + "'"));
  }
  if (text.rfind("trans(", 0) == 0) {
    if (text.size() != 10 || text[7] != ',' || text.back() != ')') {
      throw Error(ErrorKind::BadPattern, "'" + text + "': transition form is 'trans(A,B)'");
    }
    const char a = parse_letter(text[6], alphabet, "'" + text + "'");
    const char b = parse_letter(text[8], alphabet, "'" + text + "'");
    if (a == b) {
      throw Error(ErrorKind::BadPattern, "'" + text + "': platforms must differ");
    }
    return make_transition_pair(a, b, extended_families);
  }
  return make_literal(parse_pattern(text, alphabet, max_len));
}

namespace {

bool window_is_repeat_then(const Token& first, const Token& second, char platform) {
  return first.repeated && first.platform != platform && second.platform == platform;
}

}  // namespace

bool matches_whole(const CompactedSequence& seq, const Target& target) {
  if (target.kind == FamilyKind::RepeatThen) {
    return seq.tokens.size() == 2 &&
           window_is_repeat_then(seq.tokens[0], seq.tokens[1], target.wildcard_platform);
  }
  for (const Pattern& member : target.members) {
    if (seq.tokens == member) return true;
  }
  return false;
}

bool matches_contained(const CompactedSequence& seq, const Target& target) {
  if (target.kind == FamilyKind::RepeatThen) {
    for (std::size_t i = 0; i + 1 < seq.tokens.size(); ++i) {
      if (window_is_repeat_then(seq.tokens[i], seq.tokens[i + 1], target.wildcard_platform)) {
        return true;
      }
    }
    return false;
  }
  for (const Pattern& member : target.members) {
    if (member.size() > seq.tokens.size()) continue;
    for (std::size_t i = 0; i + member.size() <= seq.tokens.size(); ++i) {
      if (std::equal(member.begin(), member.end(), seq.tokens.begin() + i)) return true;
    }
  }
  return false;
}

std::set<Pattern> pattern_universe(const std::vector<CompactedSequence>& sequences,
                                   const SupportOptions& options) {
  std::set<Pattern> universe;
  for (const CompactedSequence& seq : sequences) {
    if (options.mode == SupportMode::ExactSession) {
      if (seq.tokens.size() <= options.max_len) universe.insert(seq.tokens);
      continue;
    }
    for (std::size_t len = 1; len <= options.max_len; ++len) {
      if (len > seq.tokens.size()) break;
      for (std::size_t i = 0; i + len <= seq.tokens.size(); ++i) {
        universe.insert(Pattern(seq.tokens.begin() + i, seq.tokens.begin() + i + len));
      }
    }
  }
  return universe;
}

double support(const std::vector<CompactedSequence>& student_sessions, const Target& target,
               const SupportOptions& options) {
  if (student_sessions.empty()) {
    throw Error(ErrorKind::NoSessions, "student has no sessions");
  }
  std::size_t denominator = 0;
  std::size_t numerator = 0;
  for (const CompactedSequence& seq : student_sessions) {
    if (options.exclude_long_sessions && seq.tokens.size() > options.max_len) continue;
    ++denominator;
    const bool hit = options.mode == SupportMode::ExactSession ? matches_whole(seq, target)
                                                               : matches_contained(seq, target);
    if (hit) ++numerator;
  }
  if (denominator == 0) return 0.0;
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

std::vector<SupportRecord> support_table(
    const std::map<std::string, std::vector<CompactedSequence>>& class_sessions,
    const std::vector<Target>& targets, const SupportOptions& options) {
  if (targets.empty()) {
    throw Error(ErrorKind::BadConfig, "support table needs at least one target");
  }
  std::vector<const Target*> ordered;
  ordered.reserve(targets.size());
  for (const Target& t : targets) ordered.push_back(&t);
  std::sort(ordered.begin(), ordered.end(),
            [](const Target* a, const Target* b) { return a->name < b->name; });

  std::vector<SupportRecord> records;
  records.reserve(class_sessions.size() * targets.size());
  for (const auto& [student, sessions] : class_sessions) {
    for (const Target* target : ordered) {
      SupportRecord rec;
      rec.student_id = student;
      rec.target = target->name;
      rec.mode = options.mode;
      rec.support = support(sessions, *target, options);
      records.push_back(std::move(rec));
    }
  }
  return records;
}

}  // namespace seqmine::patterns
