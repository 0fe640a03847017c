#include "doctest.h"

#include "seqmine/apriori.hpp"

#include "oracles.hpp"

using namespace seqmine;
using namespace seqmine::apriori;
using oracles::seq;

namespace {

std::set<Item> items_of(const std::string& pattern_text) {
  return itemize(seq(pattern_text));
}

std::string render(const std::set<Item>& items) {
  std::string out;
  for (const Item& item : items) {
    if (!out.empty()) out += ' ';
    out += to_string(item);
  }
  return out;
}

}  // namespace

TEST_CASE("itemize lists plain and repeated forms") {
  CHECK(render(items_of("M+")) == "M M+");
  CHECK(render(items_of("WM")) == "M W");
  CHECK(render(items_of("G+MG")) == "G G+ M");
}

TEST_CASE("itemize: a repeated item always implies the plain item") {
  syngen::Rng rng(2024);
  static const char letters[] = {'W', 'M', 'P', 'G'};
  for (int round = 0; round < 100; ++round) {
    std::string text;
    const std::size_t len = 1 + rng.next_u64() % 8;
    for (std::size_t i = 0; i < len; ++i) {
      text += letters[rng.next_u64() % 4];
      if (rng.next_u64() % 2) text += '+';
    }
    const auto items = itemize(seq(text));
    for (const Item& item : items) {
      if (item.repeated) CHECK(items.count(Item{item.platform, false}) == 1);
    }
  }
}

TEST_CASE("apriori on a uniform session list") {
  const std::vector<std::set<Item>> sessions(5, items_of("M"));
  const auto frequent = apriori_frequent(sessions, 0.02);
  REQUIRE(frequent.size() == 1);
  CHECK(to_string(frequent[0].items) == "M");
  CHECK(frequent[0].support == 1.0);
}

TEST_CASE("apriori with min_support 1.0 keeps only universal itemsets") {
  const std::vector<std::set<Item>> sessions = {items_of("M"), items_of("W")};
  CHECK(apriori_frequent(sessions, 1.0).empty());
}

TEST_CASE("apriori rejects empty input and bad support") {
  try {
    apriori_frequent({}, 0.02);
    FAIL("expected EmptySessionList");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptySessionList);
  }
  const std::vector<std::set<Item>> sessions = {items_of("M")};
  CHECK_THROWS_AS(apriori_frequent(sessions, 0.0), Error);
  CHECK_THROWS_AS(apriori_frequent(sessions, 1.5), Error);
}

TEST_CASE("apriori equals power-set enumeration on random instances") {
  syngen::Rng rng(77);
  static const char letters[] = {'W', 'M', 'P', 'G'};
  const double min_supports[] = {0.02, 0.25, 0.5};
  for (int round = 0; round < 30; ++round) {
    std::vector<std::set<Item>> sessions;
    const std::size_t n = 1 + rng.next_u64() % 12;
    for (std::size_t i = 0; i < n; ++i) {
      std::set<Item> s;
      const std::size_t k = 1 + rng.next_u64() % 4;
      for (std::size_t j = 0; j < k; ++j) {
        const char platform = letters[rng.next_u64() % 4];
        s.insert({platform, false});
        if (rng.next_u64() % 2) s.insert({platform, true});
      }
      sessions.push_back(std::move(s));
    }
    const double min_support = min_supports[round % 3];
    const auto mined = apriori_frequent(sessions, min_support);
    const auto brute = oracles::apriori_brute(sessions, min_support);
    REQUIRE(mined.size() == brute.size());
    for (std::size_t i = 0; i < mined.size(); ++i) {
      CHECK(mined[i].items == brute[i].items);
      CHECK(mined[i].support == brute[i].support);
    }
    // downward closure on every output
    std::set<ItemSet> frequent_sets;
    for (const auto& fi : mined) frequent_sets.insert(fi.items);
    for (const auto& fi : mined) {
      if (fi.items.size() < 2) continue;
      for (std::size_t drop = 0; drop < fi.items.size(); ++drop) {
        ItemSet subset;
        for (std::size_t j = 0; j < fi.items.size(); ++j) {
          if (j != drop) subset.push_back(fi.items[j]);
        }
        CHECK(frequent_sets.count(subset) == 1);
      }
    }
  }
}

TEST_CASE("rule_confidence matches the worked four-session example") {
  const std::vector<patterns::CompactedSequence> sessions = {seq("W+M"), seq("W+"), seq("WMP"),
                                                             seq("M")};
  const auto rule = rule_confidence(sessions, Item{'W', false}, Item{'M', false});
  CHECK(rule.support_antecedent == 0.75);
  CHECK(rule.support_joint == 0.5);
  CHECK(rule.confidence == doctest::Approx(2.0 / 3.0));
  CHECK_FALSE(rule.degenerate);
  CHECK(rule.support_joint <= rule.support_antecedent);
}

TEST_CASE("rule_confidence boundary cases") {
  // consequent never occurs
  const std::vector<patterns::CompactedSequence> no_m = {seq("W+"), seq("WP")};
  CHECK(rule_confidence(no_m, Item{'W', false}, Item{'M', false}).confidence == 0.0);

  // certainty: every session is [W, M]
  const std::vector<patterns::CompactedSequence> certain(4, seq("WM"));
  CHECK(rule_confidence(certain, Item{'W', false}, Item{'M', false}).confidence == 1.0);

  // degenerate: antecedent absent everywhere
  const auto degenerate = rule_confidence(certain, Item{'G', false}, Item{'M', false});
  CHECK(degenerate.confidence == 0.0);
  CHECK(degenerate.degenerate);

  CHECK_THROWS_AS(rule_confidence(certain, Item{'W', false}, Item{'W', false}), Error);
}

TEST_CASE("ordered joint needs the consequent after the antecedent") {
  const std::vector<patterns::CompactedSequence> sessions = {seq("MW")};  // M before W
  const auto ordered = rule_confidence(sessions, Item{'W', false}, Item{'M', false}, true);
  CHECK(ordered.support_joint == 0.0);
  const auto unordered = rule_confidence(sessions, Item{'W', false}, Item{'M', false}, false);
  CHECK(unordered.support_joint == 1.0);
}

TEST_CASE("repeated antecedents require a repeated token") {
  const std::vector<patterns::CompactedSequence> sessions = {seq("WM"), seq("W+M")};
  const auto plain = rule_confidence(sessions, Item{'W', false}, Item{'M', false});
  CHECK(plain.support_antecedent == 1.0);
  const auto repeated = rule_confidence(sessions, Item{'W', true}, Item{'M', false});
  CHECK(repeated.support_antecedent == 0.5);
  CHECK(repeated.confidence == 1.0);
}

TEST_CASE("group_confidence_table emits one row per group and rule") {
  std::map<Group, std::vector<patterns::CompactedSequence>> by_group;
  by_group[Group::Distinction] = {seq("W+M"), seq("W+"), seq("W+P")};
  by_group[Group::NonDistinction] = {seq("W+"), seq("W+"), seq("M")};
  const std::vector<std::pair<Item, Item>> rules = {
      {{'W', false}, {'M', false}}, {{'W', false}, {'P', false}},
      {{'W', true}, {'M', false}},  {{'W', true}, {'P', false}}};
  const auto table = group_confidence_table(by_group, rules);
  REQUIRE(table.size() == 8);
  CHECK(table[0].group == Group::Distinction);
  CHECK(table[4].group == Group::NonDistinction);
  for (const auto& rule : table) {
    CHECK(rule.confidence >= 0.0);
    CHECK(rule.confidence <= 1.0);
    CHECK(rule.support_joint <= rule.support_antecedent);
  }
}

TEST_CASE("a group of lone repeated-W sessions transitions nowhere") {
  std::map<Group, std::vector<patterns::CompactedSequence>> by_group;
  by_group[Group::Distinction] = {seq("W+"), seq("W+")};
  by_group[Group::NonDistinction] = {seq("W+M")};
  const std::vector<std::pair<Item, Item>> rules = {{{'W', false}, {'M', false}},
                                                    {{'W', true}, {'P', false}}};
  const auto table = group_confidence_table(by_group, rules);
  for (const auto& rule : table) {
    if (rule.group == Group::Distinction) CHECK(rule.confidence == 0.0);
  }
}

TEST_CASE("group_confidence_table rejects an empty group") {
  std::map<Group, std::vector<patterns::CompactedSequence>> by_group;
  by_group[Group::Distinction] = {seq("W+")};
  by_group[Group::NonDistinction] = {};
  try {
    group_confidence_table(by_group, {{{'W', false}, {'M', false}}});
    FAIL("expected EmptyGroup");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyGroup);
  }
}

TEST_CASE("planted transition rate is recovered exactly") {
  // 100 distinction W-sessions, exactly 11 move on to M
  std::vector<patterns::CompactedSequence> sessions;
  for (int i = 0; i < 11; ++i) sessions.push_back(seq("W+M"));
  for (int i = 0; i < 89; ++i) sessions.push_back(seq("W+"));
  const auto rule = rule_confidence(sessions, Item{'W', false}, Item{'M', false});
  CHECK(rule.confidence == doctest::Approx(0.11));
  CHECK(rule.support_joint == doctest::Approx(0.11));
}

TEST_CASE("item parsing accepts X and X+ forms only") {
  CHECK(parse_item("W", "GMPW") == Item{'W', false});
  CHECK(parse_item("w+", "GMPW") == Item{'W', true});
  CHECK_THROWS_AS(parse_item("", "GMPW"), Error);
  CHECK_THROWS_AS(parse_item("WX", "GMPW"), Error);
  CHECK_THROWS_AS(parse_item("X", "GMPW"), Error);
}
