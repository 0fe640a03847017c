#include "seqmine/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace seqmine::config {

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::IoError, "cannot open config '" + path + "'");
  }
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorKind::BadConfig, "'" + path + "' is not a JSON object");
  }
  return doc;
}

char parse_platform_letter(const std::string& text, const std::string& context) {
  if (text.size() != 1 || !std::isalpha(static_cast<unsigned char>(text[0]))) {
    throw Error(ErrorKind::BadConfig, context + ": platform letter must be a single letter");
  }
  return static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
}

ingest::SourceSchema parse_source(const json& src, const std::string& path) {
  if (!src.is_object() || !src.contains("path")) {
    throw Error(ErrorKind::BadConfig, path + ": each source needs at least a 'path'");
  }
  ingest::SourceSchema schema;
  schema.path = src.at("path").get<std::string>();
  if (src.contains("format")) {
    const std::string fmt = src.at("format").get<std::string>();
    if (fmt == "dsv") {
      schema.format = ingest::SourceFormat::Dsv;
    } else if (fmt == "jsonl") {
      schema.format = ingest::SourceFormat::Jsonl;
    } else {
      throw Error(ErrorKind::BadConfig, path + ": source format must be 'dsv' or 'jsonl'");
    }
  }
  if (src.contains("delimiter")) {
    const std::string d = src.at("delimiter").get<std::string>();
    if (d.size() != 1) {
      throw Error(ErrorKind::BadConfig, path + ": delimiter must be a single character");
    }
    schema.delimiter = d[0];
  }
  if (src.contains("columns")) {
    const json& cols = src.at("columns");
    if (cols.contains("id")) schema.id_field = cols.at("id").get<std::string>();
    if (cols.contains("timestamp")) schema.timestamp_field = cols.at("timestamp").get<std::string>();
    if (cols.contains("platform")) schema.platform_field = cols.at("platform").get<std::string>();
    if (cols.contains("action")) schema.action_field = cols.at("action").get<std::string>();
  }
  if (src.contains("platform")) schema.fixed_platform = src.at("platform").get<std::string>();
  if (src.contains("tag")) schema.source_tag = src.at("tag").get<std::string>();
  return schema;
}

syngen::Discrete parse_discrete(const json& obj, const std::string& name) {
  if (!obj.is_object() || !obj.contains("values") || !obj.contains("weights")) {
    throw Error(ErrorKind::InvalidProfile, name + ": expected {values: [...], weights: [...]}");
  }
  syngen::Discrete dist;
  dist.values = obj.at("values").get<std::vector<double>>();
  dist.weights = obj.at("weights").get<std::vector<double>>();
  return dist;
}

syngen::BehaviorProfile parse_profile(const json& obj, const std::string& name) {
  if (!obj.is_object()) {
    throw Error(ErrorKind::InvalidProfile, name + ": expected an object");
  }
  syngen::BehaviorProfile profile;
  for (const auto& p : obj.at("platforms").get<std::vector<std::string>>()) {
    profile.platforms += parse_platform_letter(p, name);
  }
  const json& initial = obj.at("initial");
  const json& transition = obj.at("transition");
  for (char c : profile.platforms) {
    const std::string key(1, c);
    profile.initial.push_back(initial.value(key, 0.0));
    std::vector<double> row;
    if (!transition.contains(key)) {
      throw Error(ErrorKind::InvalidProfile, name + ": transition row '" + key + "' missing");
    }
    for (char to : profile.platforms) {
      row.push_back(transition.at(key).value(std::string(1, to), 0.0));
    }
    profile.transition.push_back(std::move(row));
  }
  profile.actions_per_session = parse_discrete(obj.at("actions_per_session"), name + ".actions_per_session");
  profile.sessions_per_student = parse_discrete(obj.at("sessions_per_student"), name + ".sessions_per_student");
  profile.intra_gap_minutes = parse_discrete(obj.at("intra_gap_minutes"), name + ".intra_gap_minutes");
  profile.inter_gap_minutes = parse_discrete(obj.at("inter_gap_minutes"), name + ".inter_gap_minutes");
  profile.grades = parse_discrete(obj.at("grades"), name + ".grades");
  return profile;
}

}  // namespace

std::string ClassConfig::alphabet() const {
  std::string letters;
  for (const auto& [name, letter] : platforms) {
    if (letters.find(letter) == std::string::npos) letters += letter;
  }
  std::sort(letters.begin(), letters.end());
  return letters;
}

ClassConfig load_class_config(const std::string& path) {
  const json doc = load_json(path);
  ClassConfig cfg;
  if (!doc.contains("platforms") || !doc.at("platforms").is_object()) {
    throw Error(ErrorKind::BadConfig, path + ": 'platforms' map is required");
  }
  for (const auto& [name, letter] : doc.at("platforms").items()) {
    cfg.platforms[name] = parse_platform_letter(letter.get<std::string>(), path);
  }
  if (doc.contains("sources")) {
    for (const json& src : doc.at("sources")) cfg.sources.push_back(parse_source(src, path));
  }
  if (doc.contains("roster")) cfg.roster_path = doc.at("roster").get<std::string>();
  cfg.distinction_threshold = doc.value("distinction_threshold", 90.0);
  if (doc.contains("exclude_ids")) {
    for (const json& id : doc.at("exclude_ids")) cfg.exclude_ids.insert(id.get<std::string>());
  }
  cfg.browser_cutoff_minutes = doc.value("browser_cutoff_minutes", 15.0);
  cfg.study_cutoff_minutes = doc.value("study_cutoff_minutes", 40.0);
  const std::string mode = doc.value("support_mode", std::string("exact"));
  if (mode == "exact") {
    cfg.support_mode = patterns::SupportMode::ExactSession;
  } else if (mode == "contain") {
    cfg.support_mode = patterns::SupportMode::Containment;
  } else {
    throw Error(ErrorKind::BadConfig, path + ": support_mode must be 'exact' or 'contain'");
  }
  cfg.exclude_long_sessions = doc.value("exclude_long_sessions", false);
  cfg.extended_families = doc.value("extended_families", false);
  cfg.max_pattern_len = doc.value("max_pattern_len", std::size_t{3});
  if (doc.contains("targets")) {
    cfg.targets = doc.at("targets").get<std::vector<std::string>>();
  }
  if (doc.contains("rules")) {
    for (const json& rule : doc.at("rules")) {
      if (!rule.is_array() || rule.size() != 2) {
        throw Error(ErrorKind::BadConfig, path + ": each rule is an [antecedent, consequent] pair");
      }
      cfg.rules.emplace_back(rule.at(0).get<std::string>(), rule.at(1).get<std::string>());
    }
  }
  cfg.min_support = doc.value("min_support", 0.02);
  cfg.unordered_rules = doc.value("unordered_rules", false);
  cfg.significant_p = doc.value("significant_p", 0.05);
  cfg.edge_p = doc.value("edge_p", 0.1);
  cfg.out_dir = doc.value("output_dir", std::string("out"));

  // source and roster paths are relative to the config file
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  auto resolve = [&base](const std::string& p) {
    if (p.empty() || std::filesystem::path(p).is_absolute()) return p;
    return (base / p).string();
  };
  for (auto& src : cfg.sources) src.path = resolve(src.path);
  cfg.roster_path = resolve(cfg.roster_path);

  validate(cfg);
  return cfg;
}

void validate(const ClassConfig& cfg) {
  if (cfg.platforms.empty()) {
    throw Error(ErrorKind::BadConfig, "platform map must not be empty");
  }
  std::set<char> letters;
  for (const auto& [name, letter] : cfg.platforms) {
    if (letter < 'A' || letter > 'Z') {
      throw Error(ErrorKind::BadConfig, "platform letters must be uppercase A-Z");
    }
    if (!letters.insert(letter).second) {
      throw Error(ErrorKind::BadConfig,
                  std::string("platform letter '") + letter + "' is mapped twice");
    }
  }
  if (cfg.browser_cutoff_minutes <= 0.0 || cfg.study_cutoff_minutes <= 0.0) {
    throw Error(ErrorKind::BadConfig, "cutoffs must be positive");
  }
  if (cfg.browser_cutoff_minutes > cfg.study_cutoff_minutes) {
    throw Error(ErrorKind::BadConfig, "browser cutoff must not exceed the study cutoff");
  }
  if (!(cfg.min_support > 0.0 && cfg.min_support <= 1.0)) {
    throw Error(ErrorKind::BadConfig, "min_support must be in (0, 1]");
  }
  if (cfg.distinction_threshold < 0.0 || cfg.distinction_threshold > 100.0) {
    throw Error(ErrorKind::BadConfig, "distinction_threshold must lie in [0, 100]");
  }
  if (cfg.max_pattern_len < 1) {
    throw Error(ErrorKind::BadConfig, "max_pattern_len must be at least 1");
  }
  if (!(cfg.significant_p > 0.0 && cfg.significant_p <= cfg.edge_p && cfg.edge_p <= 1.0)) {
    throw Error(ErrorKind::BadConfig, "need 0 < significant_p <= edge_p <= 1");
  }
  // every configured target and rule must parse under the class alphabet
  resolve_targets(cfg);
  resolve_rules(cfg);
}

bool targets_are_observed(const ClassConfig& cfg) {
  return cfg.targets.size() == 1 && cfg.targets[0] == "observed";
}

std::vector<patterns::Target> resolve_targets(const ClassConfig& cfg) {
  const std::string alphabet = cfg.alphabet();
  std::vector<patterns::Target> targets;
  if (targets_are_observed(cfg)) return targets;  // expanded later from data
  if (!cfg.targets.empty()) {
    for (const std::string& spec : cfg.targets) {
      targets.push_back(
          patterns::parse_target(spec, alphabet, cfg.extended_families, cfg.max_pattern_len));
    }
  } else {
    for (char c : alphabet) {
      targets.push_back(patterns::make_literal({{c, true}}));  // X+
    }
    for (std::size_t i = 0; i < alphabet.size(); ++i) {
      for (std::size_t j = i + 1; j < alphabet.size(); ++j) {
        targets.push_back(
            patterns::make_transition_pair(alphabet[i], alphabet[j], cfg.extended_families));
      }
    }
    for (char c : alphabet) {
      targets.push_back(patterns::make_repeat_then(c));  // +X
    }
  }
  std::set<std::string> names;
  for (const patterns::Target& t : targets) {
    if (!names.insert(t.name).second) {
      throw Error(ErrorKind::BadConfig, "duplicate target '" + t.name + "'");
    }
  }
  return targets;
}

std::vector<patterns::Target> observed_targets(
    const std::map<std::string, std::vector<patterns::CompactedSequence>>& class_sessions,
    const ClassConfig& cfg) {
  patterns::SupportOptions options;
  options.mode = cfg.support_mode;
  options.max_len = cfg.max_pattern_len;
  options.exclude_long_sessions = cfg.exclude_long_sessions;
  std::vector<patterns::CompactedSequence> all;
  for (const auto& [student, sessions] : class_sessions) {
    all.insert(all.end(), sessions.begin(), sessions.end());
  }
  std::vector<patterns::Target> targets;
  for (const patterns::Pattern& p : patterns::pattern_universe(all, options)) {
    targets.push_back(patterns::make_literal(p));
  }
  return targets;
}

std::vector<std::pair<apriori::Item, apriori::Item>> resolve_rules(const ClassConfig& cfg) {
  const std::string alphabet = cfg.alphabet();
  std::vector<std::pair<apriori::Item, apriori::Item>> rules;
  if (!cfg.rules.empty()) {
    for (const auto& [antecedent, consequent] : cfg.rules) {
      rules.emplace_back(apriori::parse_item(antecedent, alphabet),
                         apriori::parse_item(consequent, alphabet));
      if (rules.back().first == rules.back().second) {
        throw Error(ErrorKind::BadConfig,
                    "rule '" + antecedent + " -> " + consequent + "' repeats one item");
      }
    }
    return rules;
  }
  for (char a : alphabet) {
    for (char b : alphabet) {
      if (a == b) continue;
      rules.emplace_back(apriori::Item{a, false}, apriori::Item{b, false});
      rules.emplace_back(apriori::Item{a, true}, apriori::Item{b, false});
    }
  }
  return rules;
}

syngen::GeneratorSpec load_generator_spec(const std::string& path) {
  const json doc = load_json(path);
  syngen::GeneratorSpec spec;
  if (!doc.contains("group_a") || !doc.contains("group_b")) {
    throw Error(ErrorKind::InvalidProfile, path + ": 'group_a' and 'group_b' profiles are required");
  }
  spec.group_a = parse_profile(doc.at("group_a"), "group_a");
  spec.group_b = parse_profile(doc.at("group_b"), "group_b");
  spec.n_per_group = doc.value("n_per_group", std::size_t{0});
  spec.study_cutoff_minutes = doc.value("study_cutoff_minutes", 40.0);
  spec.browser_cutoff_minutes = doc.value("browser_cutoff_minutes", 15.0);
  spec.distinction_threshold = doc.value("distinction_threshold", 90.0);
  if (doc.contains("base_time")) {
    const json& base = doc.at("base_time");
    if (base.is_number_integer()) {
      spec.base_time = base.get<EpochSeconds>();
    } else {
      const auto t = parse_rfc3339(base.get<std::string>());
      if (!t) {
        throw Error(ErrorKind::InvalidProfile, path + ": unparsable base_time");
      }
      spec.base_time = *t;
    }
  }
  spec.noisy_gaps = doc.value("noisy_gaps", false);
  return spec;
}

std::string config_hash(const ClassConfig& cfg) {
  json doc;
  json platforms = json::object();
  for (const auto& [name, letter] : cfg.platforms) platforms[name] = std::string(1, letter);
  doc["platforms"] = platforms;
  json sources = json::array();
  for (const auto& src : cfg.sources) {
    json s;
    s["path"] = src.path;
    s["format"] = src.format == ingest::SourceFormat::Dsv ? "dsv" : "jsonl";
    s["delimiter"] = std::string(1, src.delimiter);
    s["columns"] = {{"id", src.id_field},
                    {"timestamp", src.timestamp_field},
                    {"platform", src.platform_field},
                    {"action", src.action_field}};
    s["platform"] = src.fixed_platform;
    s["tag"] = src.source_tag;
    sources.push_back(s);
  }
  doc["sources"] = sources;
  doc["roster"] = cfg.roster_path;
  doc["distinction_threshold"] = cfg.distinction_threshold;
  doc["exclude_ids"] = cfg.exclude_ids;
  doc["browser_cutoff_minutes"] = cfg.browser_cutoff_minutes;
  doc["study_cutoff_minutes"] = cfg.study_cutoff_minutes;
  doc["support_mode"] = patterns::to_string(cfg.support_mode);
  doc["exclude_long_sessions"] = cfg.exclude_long_sessions;
  doc["extended_families"] = cfg.extended_families;
  doc["max_pattern_len"] = cfg.max_pattern_len;
  doc["targets"] = cfg.targets;
  json rules = json::array();
  for (const auto& [a, c] : cfg.rules) rules.push_back({a, c});
  doc["rules"] = rules;
  doc["min_support"] = cfg.min_support;
  doc["unordered_rules"] = cfg.unordered_rules;
  doc["significant_p"] = cfg.significant_p;
  doc["edge_p"] = cfg.edge_p;
  const std::string canonical = doc.dump();
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(syngen::fnv1a64(canonical)));
  return buf;
}

}  // namespace seqmine::config
