#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "seqmine/core.hpp"
#include "seqmine/patterns.hpp"

// Level-wise frequent itemset mining over session itemizations and
// confidence of single-item transition rules, pooled per outcome group.

namespace seqmine::apriori {

// An item is a platform letter, or letter+ when a run of length >= 2 of that
// platform occurs in the session. X+ present always implies X present.
struct Item {
  char platform = '?';
  bool repeated = false;
  auto operator<=>(const Item&) const = default;
};

std::string to_string(const Item& item);
Item parse_item(const std::string& text, const std::string& alphabet);

using ItemSet = std::vector<Item>;  // sorted, unique

std::string to_string(const ItemSet& items);  // space-separated

// The session's item view: {L : L occurs} plus {L+ : a run >= 2 of L occurs}.
std::set<Item> itemize(const patterns::CompactedSequence& seq);

struct FrequentItemset {
  ItemSet items;
  double support = 0.0;  // fraction of sessions containing every item
};

// All itemsets whose containing-session fraction is >= min_support, grown
// level-wise. Downward closure holds on the output. Result ordered by
// (size, lexicographic items).
std::vector<FrequentItemset> apriori_frequent(const std::vector<std::set<Item>>& sessions,
                                              double min_support = 0.02);

struct AssociationRule {
  Group group = Group::Distinction;
  Item antecedent;
  Item consequent;
  double support_antecedent = 0.0;
  double support_joint = 0.0;
  double confidence = 0.0;
  bool degenerate = false;  // antecedent support was 0
  bool ordered = true;      // joint required the consequent after the antecedent
};

// Confidence(A -> B) = support_joint / support(A). With `ordered` the joint
// counts sessions where a token matching B occurs strictly after a token
// matching A (not necessarily immediately after); otherwise plain
// co-occurrence. Zero antecedent support yields confidence 0, flagged
// degenerate.
AssociationRule rule_confidence(const std::vector<patterns::CompactedSequence>& sessions,
                                const Item& antecedent, const Item& consequent,
                                bool ordered = true);

// One rule per (group, antecedent, consequent) over the pooled sessions of
// each group; groups ordered Distinction first, rules in input order.
std::vector<AssociationRule> group_confidence_table(
    const std::map<Group, std::vector<patterns::CompactedSequence>>& sessions_by_group,
    const std::vector<std::pair<Item, Item>>& rules, bool ordered = true);

}  // namespace seqmine::apriori
