#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "seqmine/core.hpp"
#include "seqmine/sessionize.hpp"

// Run-length compaction of session action sequences, pattern targets
// (single patterns, transition-pair families, the "+P" wildcard) and
// per-student support computation.

namespace seqmine::patterns {

// One compacted unit: a platform letter plus the repeat marker for runs >= 2.
struct Token {
  char platform = '?';
  bool repeated = false;
  auto operator<=>(const Token&) const = default;
};

std::string to_string(const Token& token);

// Adjacent tokens always carry distinct platforms.
struct CompactedSequence {
  std::vector<Token> tokens;
  std::string student_id;
  std::size_t session_index = 0;  // position in the student's session list
};

// Run-length encodes the session's platform sequence ("MMM" -> "M+").
CompactedSequence compact(const session::Session& s, std::size_t session_index = 0);

// Compacts `sessions` (as produced by build_sessions) grouped per student,
// preserving per-student session order.
std::map<std::string, std::vector<CompactedSequence>> compact_by_student(
    const std::vector<session::Session>& sessions);

// An ordered token sequence of length 1..3, adjacent platforms distinct.
using Pattern = std::vector<Token>;

std::string to_string(const Pattern& pattern);

enum class FamilyKind { Literal, TransitionPair, RepeatThen };

// A named analysis unit: either explicit member patterns or the "+P"
// wildcard that matches a repeated token immediately followed by P.
struct Target {
  std::string name;
  FamilyKind kind = FamilyKind::Literal;
  std::vector<Pattern> members;   // Literal / TransitionPair
  char wildcard_platform = 0;     // RepeatThen
};

Target make_literal(const Pattern& pattern);

// trans(A,B): the four tabulated forms {A+B, B+A, AB, BA}; with `extended`
// also the trailing-repeat forms {AB+, BA+, A+B+, B+A+}.
Target make_transition_pair(char a, char b, bool extended = false);

Target make_repeat_then(char platform);

// Pattern text: letters with optional '+', e.g. "W+M", "P+". Case-insensitive.
Pattern parse_pattern(const std::string& text, const std::string& alphabet,
                      std::size_t max_len = 3);

// Target text: a pattern, "trans(A,B)" or the wildcard "+P".
Target parse_target(const std::string& text, const std::string& alphabet,
                    bool extended_families = false, std::size_t max_len = 3);

enum class SupportMode { ExactSession, Containment };

const char* to_string(SupportMode mode);

struct SupportOptions {
  SupportMode mode = SupportMode::ExactSession;
  std::size_t max_len = 3;  // patterns longer than this are never counted
  // Drop sessions longer than max_len tokens entirely (numerator and
  // denominator) instead of keeping them in the denominator only.
  bool exclude_long_sessions = false;
};

bool matches_whole(const CompactedSequence& seq, const Target& target);
bool matches_contained(const CompactedSequence& seq, const Target& target);

// Every distinct observed pattern of length 1..max_len: whole compacted
// sequences in ExactSession mode, all contiguous windows in Containment mode.
std::set<Pattern> pattern_universe(const std::vector<CompactedSequence>& sequences,
                                   const SupportOptions& options);

// Fraction of the student's sessions matching the target under the given
// mode. Throws NoSessions when the student has no sessions.
double support(const std::vector<CompactedSequence>& student_sessions, const Target& target,
               const SupportOptions& options);

struct SupportRecord {
  std::string student_id;
  std::string target;
  SupportMode mode = SupportMode::ExactSession;
  double support = 0.0;
};

// One record per (student, target), zero-filled for absent patterns, ordered
// by (student_id, target name).
std::vector<SupportRecord> support_table(
    const std::map<std::string, std::vector<CompactedSequence>>& class_sessions,
    const std::vector<Target>& targets, const SupportOptions& options);

}  // namespace seqmine::patterns
