#pragma once

// Behavior profiles shared by the syngen, report and acceptance suites.

#include <string>

#include "seqmine/syngen.hpp"

namespace fixtures {

// Four-platform profile. Each row keeps probability `stay` on itself; the
// exit mass routes to P with share `exit_to_p` and splits the rest evenly.
// `exit_to_p` is the planted repeated-X -> P transition rate.
inline seqmine::syngen::BehaviorProfile profile(double exit_to_p, bool distinction_grades,
                                                double stay = 0.5) {
  seqmine::syngen::BehaviorProfile p;
  p.platforms = "GMPW";
  p.initial = {0.25, 0.35, 0.1, 0.3};
  const std::size_t k = p.platforms.size();
  const std::size_t p_index = p.platforms.find('P');
  for (std::size_t r = 0; r < k; ++r) {
    std::vector<double> row(k, 0.0);
    row[r] = stay;
    const double exit_mass = 1.0 - stay;
    if (r == p_index) {
      // leaving P: split evenly over the other platforms
      for (std::size_t c = 0; c < k; ++c) {
        if (c != r) row[c] = exit_mass / static_cast<double>(k - 1);
      }
    } else {
      row[p_index] = exit_mass * exit_to_p;
      const double rest = exit_mass * (1.0 - exit_to_p) / static_cast<double>(k - 2);
      for (std::size_t c = 0; c < k; ++c) {
        if (c != r && c != p_index) row[c] = rest;
      }
    }
    p.transition.push_back(std::move(row));
  }
  p.actions_per_session = {{2, 3, 4, 5, 6}, {0.35, 0.30, 0.20, 0.10, 0.05}};
  p.sessions_per_student = {{15, 20, 25, 30}, {0.25, 0.35, 0.25, 0.15}};
  p.intra_gap_minutes = {{0.5, 1, 2, 5, 10}, {0.3, 0.3, 0.2, 0.1, 0.1}};
  p.inter_gap_minutes = {{60, 120, 480, 1440}, {0.4, 0.3, 0.2, 0.1}};
  if (distinction_grades) {
    p.grades = {{91, 93, 95, 97}, {0.25, 0.25, 0.25, 0.25}};
  } else {
    p.grades = {{70, 75, 80, 85}, {0.25, 0.25, 0.25, 0.25}};
  }
  return p;
}

inline seqmine::syngen::GeneratorSpec spec(double exit_to_p_a, double exit_to_p_b,
                                           std::size_t n_per_group) {
  seqmine::syngen::GeneratorSpec s;
  s.group_a = profile(exit_to_p_a, true);
  s.group_b = profile(exit_to_p_b, false);
  s.n_per_group = n_per_group;
  s.study_cutoff_minutes = 40.0;
  s.browser_cutoff_minutes = 15.0;
  return s;
}

}  // namespace fixtures
