#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "seqmine/core.hpp"
#include "seqmine/sessionize.hpp"

// Deterministic synthetic class generator: Markov behavior profiles over
// platforms with explicit session and gap distributions, plus the manifest
// that serves as the ground-truth oracle for the whole pipeline.

namespace seqmine::syngen {

// SplitMix64. Fixed-width integer arithmetic only, so streams reproduce
// bit-identically across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double next_unit() {  // [0, 1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

std::uint64_t fnv1a64(std::string_view s);

// Bounded-support discrete distribution: values with positive weights.
struct Discrete {
  std::vector<double> values;
  std::vector<double> weights;
};

double draw(const Discrete& dist, Rng& rng);

struct BehaviorProfile {
  std::string platforms;                        // letters, e.g. "WMPG"
  std::vector<double> initial;                  // sums to 1
  std::vector<std::vector<double>> transition;  // row-stochastic
  Discrete actions_per_session;                 // integral values >= 1
  Discrete sessions_per_student;                // integral values >= 0
  Discrete intra_gap_minutes;                   // support strictly below the cutoff
  Discrete inter_gap_minutes;                   // support at or above the cutoff
  Discrete grades;                              // values in [0, 100]
};

// Throws InvalidProfile on row-sum or gap-support violations. `noisy_gaps`
// skips the gap/cutoff separation checks (robustness testing only).
void validate_profile(const BehaviorProfile& profile, double cutoff_minutes,
                      bool noisy_gaps = false);

struct GeneratorSpec {
  BehaviorProfile group_a;  // distinction-side profile
  BehaviorProfile group_b;
  std::size_t n_per_group = 0;
  double study_cutoff_minutes = 40.0;
  double browser_cutoff_minutes = 15.0;
  double distinction_threshold = 90.0;
  EpochSeconds base_time = 1439769600;  // 2015-08-17T00:00:00Z
  bool noisy_gaps = false;
};

// Ground-truth record of one generated session.
struct ManifestSession {
  std::string student_id;
  std::size_t index = 0;  // position in the student's session list
  EpochSeconds start = 0;
  EpochSeconds end = 0;
  std::size_t n_events = 0;
  std::string sequence;  // compacted token string, e.g. "W+M"
};

struct GeneratedClass {
  std::vector<std::string> event_files;  // one per platform letter
  std::string roster_file;
  std::string manifest_file;
  std::string config_file;  // ready-to-run class config for the pipeline
  std::vector<ManifestSession> manifest;
  std::string platforms;  // union alphabet
};

// Writes event files, roster, manifest and a matching class config under
// out_dir. Byte-identical for a fixed (spec, seed).
GeneratedClass generate_class(const GeneratorSpec& spec, std::uint64_t seed,
                              const std::string& out_dir);

std::vector<ManifestSession> load_manifest(const std::string& path);

struct RoundtripReport {
  std::size_t students_checked = 0;
  std::size_t sessions_checked = 0;
  std::vector<std::string> divergences;
  bool clean() const { return divergences.empty(); }
};

// Compares pipeline-recovered sessions (and their compacted sequences)
// against the manifest. Divergences are report content, not errors.
RoundtripReport verify_roundtrip(const std::vector<ManifestSession>& manifest,
                                 const std::vector<session::Session>& recovered);

}  // namespace seqmine::syngen
