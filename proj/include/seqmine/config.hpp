#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "seqmine/apriori.hpp"
#include "seqmine/core.hpp"
#include "seqmine/ingest.hpp"
#include "seqmine/patterns.hpp"
#include "seqmine/syngen.hpp"

// Class configuration: the per-class constants (platform map, cutoffs,
// thresholds, targets, rules) plus source and roster locations.

namespace seqmine::config {

struct ClassConfig {
  std::map<std::string, char> platforms;  // source log name -> letter
  std::vector<ingest::SourceSchema> sources;
  std::string roster_path;
  double distinction_threshold = 90.0;
  std::set<std::string> exclude_ids;
  double browser_cutoff_minutes = 15.0;
  double study_cutoff_minutes = 40.0;
  patterns::SupportMode support_mode = patterns::SupportMode::ExactSession;
  bool exclude_long_sessions = false;
  bool extended_families = false;
  std::size_t max_pattern_len = 3;
  // Target specs in pattern syntax; empty means the default report set
  // (X+ per platform, trans(A,B) per pair, +X per platform). The single
  // entry "observed" switches to the full observed pattern universe.
  std::vector<std::string> targets;
  // (antecedent, consequent) item pairs; empty means every ordered platform
  // pair as both (A, B) and (A+, B).
  std::vector<std::pair<std::string, std::string>> rules;
  double min_support = 0.02;
  bool unordered_rules = false;
  double significant_p = 0.05;
  double edge_p = 0.1;
  std::string out_dir = "out";

  std::string alphabet() const;  // sorted platform letters
};

ClassConfig load_class_config(const std::string& path);

void validate(const ClassConfig& cfg);

// FNV-1a of the canonical JSON rendering; stable across runs.
std::string config_hash(const ClassConfig& cfg);

bool targets_are_observed(const ClassConfig& cfg);

// Parses configured target specs, or builds the default report set.
std::vector<patterns::Target> resolve_targets(const ClassConfig& cfg);

// Expands observed-universe targets from actual sequences (used when
// targets == ["observed"]).
std::vector<patterns::Target> observed_targets(
    const std::map<std::string, std::vector<patterns::CompactedSequence>>& class_sessions,
    const ClassConfig& cfg);

std::vector<std::pair<apriori::Item, apriori::Item>> resolve_rules(const ClassConfig& cfg);

// Generator spec document: group_a / group_b profiles plus counts and
// cutoffs.
syngen::GeneratorSpec load_generator_spec(const std::string& path);

}  // namespace seqmine::config
