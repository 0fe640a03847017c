#pragma once

#include <string>
#include <vector>

#include "seqmine/core.hpp"
#include "seqmine/patterns.hpp"

// Kruskal-Wallis rank comparison of the two outcome groups' per-student
// support distributions, with tie correction and significance tiers.

namespace seqmine::stats {

struct KWResult {
  double h = 0.0;              // tie-corrected test statistic
  double p = 1.0;              // chi-square upper tail, 1 degree of freedom
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  double tie_correction = 1.0; // 1 - sum(t^3 - t) / (N^3 - N)
  bool degenerate = false;     // every pooled value tied
};

// Midranks over the pooled sample; H = [12/(N(N+1))] * sum R_j^2/n_j
// - 3(N+1), divided by the tie correction. All-tied input returns H = 0,
// p = 1 with the degenerate flag set.
KWResult kruskal_wallis(const std::vector<double>& a, const std::vector<double>& b);

// Regularized upper incomplete gamma Q(a, x).
double regularized_gamma_q(double a, double x);

// P(X >= x) for a chi-square variable with `dof` degrees of freedom.
double chi_square_upper_tail(double x, int dof);

enum class Tier { Significant, Edge, NotSignificant };

const char* to_string(Tier tier);

struct GroupComparison {
  std::string target;
  double mean_distinction = 0.0;
  double mean_nondistinction = 0.0;
  KWResult kw;
  Tier tier = Tier::NotSignificant;
};

struct ComparisonTable {
  std::vector<GroupComparison> rows;  // ordered by target name
  // roster students with no sessions; they have no support distribution and
  // are left out of the test
  std::size_t excluded_n = 0;
};

// One row per target. Group means are arithmetic means of per-student
// supports (zero-support students included). Tier thresholds: Significant
// when p < significant_p, Edge when p < edge_p.
// `targets` empty means every target present in the support table.
ComparisonTable compare_groups(const std::vector<patterns::SupportRecord>& supports,
                               const std::vector<RosterEntry>& roster,
                               const std::vector<std::string>& targets = {},
                               double significant_p = 0.05, double edge_p = 0.1);

}  // namespace seqmine::stats
