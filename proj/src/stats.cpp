#include "seqmine/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace seqmine::stats {

const char* to_string(Tier tier) {
  switch (tier) {
    case Tier::Significant: return "Significant";
    case Tier::Edge: return "Edge";
    case Tier::NotSignificant: return "NotSignificant";
  }
  return "NotSignificant";
}

namespace {

// Series expansion of P(a, x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double term = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x), valid for x >= a + 1 (modified Lentz).
double gamma_q_continued_fraction(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) {
    throw Error(ErrorKind::BadConfig, "regularized_gamma_q needs a > 0 and x >= 0");
  }
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_continued_fraction(a, x);
}

double chi_square_upper_tail(double x, int dof) {
  if (dof < 1) {
    throw Error(ErrorKind::BadConfig, "chi-square needs dof >= 1");
  }
  if (x <= 0.0) return 1.0;
  return regularized_gamma_q(0.5 * dof, 0.5 * x);
}

KWResult kruskal_wallis(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty() || a.size() + b.size() < 3) {
    throw Error(ErrorKind::InsufficientData,
                "Kruskal-Wallis needs both groups non-empty and at least 3 values");
  }
  KWResult result;
  result.n_a = a.size();
  result.n_b = b.size();
  const std::size_t n_total = a.size() + b.size();
  const double n = static_cast<double>(n_total);

  struct Entry {
    double value;
    bool in_a;
  };
  std::vector<Entry> pooled;
  pooled.reserve(n_total);
  for (double v : a) pooled.push_back({v, true});
  for (double v : b) pooled.push_back({v, false});
  std::sort(pooled.begin(), pooled.end(),
            [](const Entry& x, const Entry& y) { return x.value < y.value; });

  double rank_sum_a = 0.0;
  double tie_term = 0.0;  // sum of t^3 - t over tie groups
  std::size_t i = 0;
  while (i < n_total) {
    std::size_t j = i;
    while (j < n_total && pooled[j].value == pooled[i].value) ++j;
    const double t = static_cast<double>(j - i);
    // midrank of positions i..j-1 (1-based)
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (pooled[k].in_a) rank_sum_a += midrank;
    }
    tie_term += t * t * t - t;
    i = j;
  }
  const double rank_sum_b = n * (n + 1.0) / 2.0 - rank_sum_a;

  const double h_uncorrected =
      12.0 / (n * (n + 1.0)) *
          (rank_sum_a * rank_sum_a / static_cast<double>(a.size()) +
           rank_sum_b * rank_sum_b / static_cast<double>(b.size())) -
      3.0 * (n + 1.0);
  const double correction = 1.0 - tie_term / (n * n * n - n);
  result.tie_correction = correction;
  if (correction <= 0.0) {
    result.degenerate = true;
    result.h = 0.0;
    result.p = 1.0;
    return result;
  }
  result.h = std::max(0.0, h_uncorrected / correction);
  // chi-square upper tail with 1 dof in closed form
  result.p = std::erfc(std::sqrt(result.h / 2.0));
  result.p = std::min(1.0, std::max(result.p, std::numeric_limits<double>::min()));
  return result;
}

ComparisonTable compare_groups(const std::vector<patterns::SupportRecord>& supports,
                               const std::vector<RosterEntry>& roster,
                               const std::vector<std::string>& targets, double significant_p,
                               double edge_p) {
  std::map<std::string, Group> group_of;
  for (const RosterEntry& entry : roster) group_of[entry.student_id] = entry.group;

  // per-target per-group support vectors, in record (student) order
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_target;
  std::set<std::string> students_with_sessions;
  for (const patterns::SupportRecord& rec : supports) {
    auto it = group_of.find(rec.student_id);
    if (it == group_of.end()) {
      throw Error(ErrorKind::UnknownStudent,
                  "student '" + rec.student_id + "' is not on the roster");
    }
    students_with_sessions.insert(rec.student_id);
    auto& [dist, nondist] = by_target[rec.target];
    if (it->second == Group::Distinction) {
      dist.push_back(rec.support);
    } else {
      nondist.push_back(rec.support);
    }
  }

  std::vector<std::string> selected = targets;
  if (selected.empty()) {
    for (const auto& [name, unused] : by_target) selected.push_back(name);
  } else {
    std::sort(selected.begin(), selected.end());
  }

  ComparisonTable table;
  for (const RosterEntry& entry : roster) {
    if (!students_with_sessions.count(entry.student_id)) ++table.excluded_n;
  }

  for (const std::string& name : selected) {
    auto it = by_target.find(name);
    if (it == by_target.end()) {
      throw Error(ErrorKind::BadConfig, "target '" + name + "' is absent from the support table");
    }
    const auto& [dist, nondist] = it->second;
    if (dist.empty() || nondist.empty()) {
      throw Error(ErrorKind::EmptyGroup, "target '" + name + "': a group has no students");
    }
    GroupComparison row;
    row.target = name;
    double sum_d = 0.0, sum_n = 0.0;
    for (double v : dist) sum_d += v;
    for (double v : nondist) sum_n += v;
    row.mean_distinction = sum_d / static_cast<double>(dist.size());
    row.mean_nondistinction = sum_n / static_cast<double>(nondist.size());
    row.kw = kruskal_wallis(dist, nondist);
    if (row.kw.p < significant_p) {
      row.tier = Tier::Significant;
    } else if (row.kw.p < edge_p) {
      row.tier = Tier::Edge;
    } else {
      row.tier = Tier::NotSignificant;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace seqmine::stats
