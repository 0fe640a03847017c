#include "seqmine/apriori.hpp"

#include <algorithm>
#include <cctype>

namespace seqmine::apriori {

std::string to_string(const Item& item) {
  std::string s(1, item.platform);
  if (item.repeated) s += '+';
  return s;
}

std::string to_string(const ItemSet& items) {
  std::string s;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) s += ' ';
    s += to_string(items[i]);
  }
  return s;
}

Item parse_item(const std::string& text, const std::string& alphabet) {
  if (text.empty() || text.size() > 2 || (text.size() == 2 && text[1] != '+')) {
    throw Error(ErrorKind::BadPattern, "'" + text + "': item form is 'X' or 'X+'");
  }
  const char u = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
  if (alphabet.find(u) == std::string::npos) {
    throw Error(ErrorKind::BadPattern, "'" + text + "': platform '" + std::string(1, text[0]) +
                                           "' is not in the class alphabet '" + alphabet + "'");
  }
  return Item{u, text.size() == 2};
}

std::set<Item> itemize(const patterns::CompactedSequence& seq) {
  std::set<Item> items;
  for (const patterns::Token& t : seq.tokens) {
    items.insert(Item{t.platform, false});
    if (t.repeated) items.insert(Item{t.platform, true});
  }
  return items;
}

namespace {

bool session_contains(const std::set<Item>& session, const ItemSet& candidate) {
  for (const Item& item : candidate) {
    if (!session.count(item)) return false;
  }
  return true;
}

// Join step: pairs of (k-1)-sets sharing their first k-2 items produce a
// k-candidate; the prune step then requires all (k-1)-subsets frequent.
std::vector<ItemSet> generate_candidates(const std::vector<ItemSet>& previous) {
  std::vector<ItemSet> candidates;
  std::set<ItemSet> previous_set(previous.begin(), previous.end());
  for (std::size_t i = 0; i < previous.size(); ++i) {
    for (std::size_t j = i + 1; j < previous.size(); ++j) {
      const ItemSet& a = previous[i];
      const ItemSet& b = previous[j];
      if (!std::equal(a.begin(), a.end() - 1, b.begin(), b.end() - 1)) continue;
      ItemSet candidate = a;
      candidate.push_back(b.back());
      if (candidate[candidate.size() - 2] > candidate.back()) {
        std::swap(candidate[candidate.size() - 2], candidate.back());
      }
      bool all_subsets_frequent = true;
      for (std::size_t drop = 0; drop < candidate.size(); ++drop) {
        ItemSet subset;
        subset.reserve(candidate.size() - 1);
        for (std::size_t k = 0; k < candidate.size(); ++k) {
          if (k != drop) subset.push_back(candidate[k]);
        }
        if (!previous_set.count(subset)) {
          all_subsets_frequent = false;
          break;
        }
      }
      if (all_subsets_frequent) candidates.push_back(std::move(candidate));
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  return candidates;
}

bool token_matches(const patterns::Token& token, const Item& item) {
  return token.platform == item.platform && (!item.repeated || token.repeated);
}

}  // namespace

std::vector<FrequentItemset> apriori_frequent(const std::vector<std::set<Item>>& sessions,
                                              double min_support) {
  if (sessions.empty()) {
    throw Error(ErrorKind::EmptySessionList, "apriori needs at least one session");
  }
  if (!(min_support > 0.0 && min_support <= 1.0)) {
    throw Error(ErrorKind::BadConfig, "min_support must be in (0, 1]");
  }
  const double n = static_cast<double>(sessions.size());

  std::map<Item, std::size_t> singleton_counts;
  for (const auto& session : sessions) {
    for (const Item& item : session) ++singleton_counts[item];
  }
  std::vector<FrequentItemset> result;
  std::vector<ItemSet> level;
  for (const auto& [item, count] : singleton_counts) {
    const double supp = static_cast<double>(count) / n;
    if (supp >= min_support) {
      level.push_back({item});
      result.push_back({{item}, supp});
    }
  }

  while (!level.empty()) {
    const std::vector<ItemSet> candidates = generate_candidates(level);
    std::vector<ItemSet> next_level;
    for (const ItemSet& candidate : candidates) {
      std::size_t count = 0;
      for (const auto& session : sessions) {
        if (session_contains(session, candidate)) ++count;
      }
      const double supp = static_cast<double>(count) / n;
      if (supp >= min_support) {
        next_level.push_back(candidate);
        result.push_back({candidate, supp});
      }
    }
    level = std::move(next_level);
  }

  std::sort(result.begin(), result.end(), [](const FrequentItemset& a, const FrequentItemset& b) {
    if (a.items.size() != b.items.size()) return a.items.size() < b.items.size();
    return a.items < b.items;
  });
  return result;
}

AssociationRule rule_confidence(const std::vector<patterns::CompactedSequence>& sessions,
                                const Item& antecedent, const Item& consequent, bool ordered) {
  if (antecedent == consequent) {
    throw Error(ErrorKind::BadConfig, "rule antecedent and consequent must differ");
  }
  AssociationRule rule;
  rule.antecedent = antecedent;
  rule.consequent = consequent;
  rule.ordered = ordered;
  if (sessions.empty()) {
    throw Error(ErrorKind::EmptySessionList, "rule confidence needs at least one session");
  }

  std::size_t antecedent_count = 0;
  std::size_t joint_count = 0;
  for (const patterns::CompactedSequence& seq : sessions) {
    std::size_t first_antecedent = seq.tokens.size();
    for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
      if (token_matches(seq.tokens[i], antecedent)) {
        first_antecedent = i;
        break;
      }
    }
    if (first_antecedent == seq.tokens.size()) continue;
    ++antecedent_count;
    // ordered: a consequent token strictly after the earliest antecedent
    // token; unordered: plain co-occurrence anywhere in the session
    const std::size_t search_from = ordered ? first_antecedent + 1 : 0;
    for (std::size_t i = search_from; i < seq.tokens.size(); ++i) {
      if (token_matches(seq.tokens[i], consequent)) {
        ++joint_count;
        break;
      }
    }
  }

  const double n = static_cast<double>(sessions.size());
  rule.support_antecedent = static_cast<double>(antecedent_count) / n;
  rule.support_joint = static_cast<double>(joint_count) / n;
  if (antecedent_count == 0) {
    rule.confidence = 0.0;
    rule.degenerate = true;
  } else {
    rule.confidence = static_cast<double>(joint_count) / static_cast<double>(antecedent_count);
  }
  return rule;
}

std::vector<AssociationRule> group_confidence_table(
    const std::map<Group, std::vector<patterns::CompactedSequence>>& sessions_by_group,
    const std::vector<std::pair<Item, Item>>& rules, bool ordered) {
  for (Group g : {Group::Distinction, Group::NonDistinction}) {
    auto it = sessions_by_group.find(g);
    if (it == sessions_by_group.end() || it->second.empty()) {
      throw Error(ErrorKind::EmptyGroup,
                  std::string("group ") + to_string(g) + " has no sessions");
    }
  }
  std::vector<AssociationRule> table;
  table.reserve(2 * rules.size());
  for (Group g : {Group::Distinction, Group::NonDistinction}) {
    const auto& sessions = sessions_by_group.at(g);
    for (const auto& [antecedent, consequent] : rules) {
      AssociationRule rule = rule_confidence(sessions, antecedent, consequent, ordered);
      rule.group = g;
      table.push_back(rule);
    }
  }
  return table;
}

}  // namespace seqmine::apriori
