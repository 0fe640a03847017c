#include "seqmine/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "seqmine/ingest.hpp"

namespace seqmine::report {

namespace {

[[noreturn]] void rethrow_tagged(const Error& e, const std::string& stage) {
  throw Error(e.kind(), "stage " + stage + ": " + e.what());
}

std::string fmt(double v, const char* spec) {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::UnwritableOutput, "cannot write '" + path.string() + "'");
  }
  return out;
}

}  // namespace

TransactionStream ingest_stage(const config::ClassConfig& cfg) {
  try {
    std::vector<std::vector<EventRecord>> parsed;
    parsed.reserve(cfg.sources.size());
    for (const ingest::SourceSchema& schema : cfg.sources) {
      parsed.push_back(ingest::parse_log(schema, cfg.platforms));
    }
    TransactionStream stream = ingest::merge_logs(parsed);
    if (!cfg.exclude_ids.empty()) {
      stream = ingest::filter_students(stream, cfg.exclude_ids);
    }
    return stream;
  } catch (const Error& e) {
    rethrow_tagged(e, "ingest");
  }
}

void write_canonical_events(const TransactionStream& stream, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "student_id,timestamp,platform,action\n";
  for (const EventRecord& ev : stream.events) {
    out << ev.student_id << ',' << format_rfc3339(ev.timestamp) << ',' << ev.platform << ','
        << ev.action_kind << '\n';
  }
}

TransactionStream load_canonical_events(const std::string& path, const config::ClassConfig& cfg) {
  ingest::SourceSchema schema;
  schema.path = path;
  ingest::PlatformMap letters;
  for (char c : cfg.alphabet()) letters[std::string(1, c)] = c;
  std::vector<std::vector<EventRecord>> sources;
  sources.push_back(ingest::parse_log(schema, letters));
  TransactionStream stream = ingest::merge_logs(sources);
  if (!cfg.exclude_ids.empty()) stream = ingest::filter_students(stream, cfg.exclude_ids);
  return stream;
}

ReportBundle run_pipeline(const config::ClassConfig& cfg) {
  config::validate(cfg);
  ReportBundle bundle;
  bundle.config_hash = config::config_hash(cfg);

  const TransactionStream stream = ingest_stage(cfg);

  std::vector<RosterEntry> roster;
  try {
    if (cfg.roster_path.empty()) {
      throw Error(ErrorKind::BadConfig, "no roster file configured");
    }
    roster = ingest::load_roster(cfg.roster_path, cfg.distinction_threshold);
    std::map<std::string, Group> group_of;
    for (const RosterEntry& entry : roster) group_of[entry.student_id] = entry.group;
    for (const auto& [student, positions] : stream.by_student) {
      if (!group_of.count(student)) {
        throw Error(ErrorKind::UnknownStudent,
                    "student '" + student + "' has events but no roster entry");
      }
    }
  } catch (const Error& e) {
    rethrow_tagged(e, "roster");
  }
  std::map<std::string, Group> group_of;
  for (const RosterEntry& entry : roster) group_of[entry.student_id] = entry.group;

  std::vector<session::Session> sessions;
  try {
    sessions = session::build_sessions(stream, cfg.study_cutoff_minutes);
  } catch (const Error& e) {
    rethrow_tagged(e, "sessionize");
  }

  // per-group session counts
  {
    std::map<Group, SessionSummaryRow> summary;
    summary[Group::Distinction].group = Group::Distinction;
    summary[Group::NonDistinction].group = Group::NonDistinction;
    std::map<std::string, std::size_t> sessions_per_student;
    for (const session::Session& s : sessions) {
      const Group g = group_of.at(s.student_id);
      summary[g].sessions += 1;
      summary[g].events += s.events.size();
      sessions_per_student[s.student_id] += 1;
    }
    for (const auto& [student, count] : sessions_per_student) {
      if (count > 0) summary[group_of.at(student)].students += 1;
    }
    bundle.session_summary.push_back(summary[Group::Distinction]);
    bundle.session_summary.push_back(summary[Group::NonDistinction]);
  }

  std::map<std::string, std::vector<patterns::CompactedSequence>> compacted;
  patterns::SupportOptions options;
  options.mode = cfg.support_mode;
  options.max_len = cfg.max_pattern_len;
  options.exclude_long_sessions = cfg.exclude_long_sessions;
  try {
    compacted = patterns::compact_by_student(sessions);
    const std::vector<patterns::Target> targets = config::targets_are_observed(cfg)
                                                      ? config::observed_targets(compacted, cfg)
                                                      : config::resolve_targets(cfg);
    bundle.supports = patterns::support_table(compacted, targets, options);
  } catch (const Error& e) {
    rethrow_tagged(e, "patterns");
  }

  try {
    std::map<Group, std::vector<patterns::CompactedSequence>> by_group;
    by_group[Group::Distinction];
    by_group[Group::NonDistinction];
    for (const auto& [student, seqs] : compacted) {
      auto& pool = by_group[group_of.at(student)];
      pool.insert(pool.end(), seqs.begin(), seqs.end());
    }
    for (const auto& [group, pool] : by_group) {
      if (pool.empty()) {
        throw Error(ErrorKind::EmptyGroup,
                    std::string("group ") + to_string(group) + " has no sessions");
      }
      std::vector<std::set<apriori::Item>> itemized;
      itemized.reserve(pool.size());
      for (const patterns::CompactedSequence& seq : pool) {
        itemized.push_back(apriori::itemize(seq));
      }
      // min_support is applied per group: the tables are per-group
      bundle.itemsets[group] = apriori::apriori_frequent(itemized, cfg.min_support);
    }
    bundle.confidences = apriori::group_confidence_table(by_group, config::resolve_rules(cfg),
                                                         !cfg.unordered_rules);
  } catch (const Error& e) {
    rethrow_tagged(e, "mine");
  }

  try {
    bundle.comparison =
        stats::compare_groups(bundle.supports, roster, {}, cfg.significant_p, cfg.edge_p);
  } catch (const Error& e) {
    rethrow_tagged(e, "stats");
  }

  bundle.metadata["tool_version"] = kToolVersion;
  bundle.metadata["config_hash"] = bundle.config_hash;
  bundle.metadata["support_mode"] = patterns::to_string(cfg.support_mode);
  bundle.metadata["support_denominator"] =
      cfg.exclude_long_sessions ? "sessions_up_to_max_len" : "all_sessions";
  bundle.metadata["extended_families"] = cfg.extended_families ? "true" : "false";
  bundle.metadata["rule_ordering"] = cfg.unordered_rules ? "co-occurrence" : "after";
  bundle.metadata["min_support"] = fmt(cfg.min_support, "%.6g");
  bundle.metadata["min_support_scope"] = "per_group";
  bundle.metadata["study_cutoff_minutes"] = fmt(cfg.study_cutoff_minutes, "%.6g");
  bundle.metadata["browser_cutoff_minutes"] = fmt(cfg.browser_cutoff_minutes, "%.6g");
  bundle.metadata["distinction_threshold"] = fmt(cfg.distinction_threshold, "%.6g");
  bundle.metadata["significant_p"] = fmt(cfg.significant_p, "%.6g");
  bundle.metadata["edge_p"] = fmt(cfg.edge_p, "%.6g");
  bundle.metadata["zero_session_students"] = "excluded_from_test";
  bundle.metadata["excluded_n"] = std::to_string(bundle.comparison.excluded_n);
  // the +X wildcard accepts both a plain and a repeated follower token
  bundle.metadata["wildcard_follower"] = "plain_or_repeated";
  return bundle;
}

void write_session_summary(const ReportBundle& bundle, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "group,students,sessions,events\n";
  for (const SessionSummaryRow& row : bundle.session_summary) {
    out << to_string(row.group) << ',' << row.students << ',' << row.sessions << ',' << row.events
        << '\n';
  }
}

void write_supports(const ReportBundle& bundle, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "student_id,target,mode,support\n";
  for (const patterns::SupportRecord& rec : bundle.supports) {
    out << rec.student_id << ',' << rec.target << ',' << patterns::to_string(rec.mode) << ','
        << fmt(rec.support, "%.6f") << '\n';
  }
}

void write_itemsets(const ReportBundle& bundle, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "group,itemset,support\n";
  for (const auto& [group, itemsets] : bundle.itemsets) {
    for (const apriori::FrequentItemset& fi : itemsets) {
      out << to_string(group) << ',' << apriori::to_string(fi.items) << ','
          << fmt(fi.support, "%.6f") << '\n';
    }
  }
}

void write_confidence(const ReportBundle& bundle, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "group,antecedent,consequent,support_joint,confidence\n";
  for (const apriori::AssociationRule& rule : bundle.confidences) {
    out << to_string(rule.group) << ',' << apriori::to_string(rule.antecedent) << ','
        << apriori::to_string(rule.consequent) << ',' << fmt(rule.support_joint, "%.6f") << ','
        << fmt(rule.confidence, "%.6f") << '\n';
  }
}

void write_comparison_csv(const ReportBundle& bundle, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "target,mean_distinction,mean_nondistinction,H,p,tier\n";
  for (const stats::GroupComparison& row : bundle.comparison.rows) {
    out << row.target << ',' << fmt(row.mean_distinction, "%.6f") << ','
        << fmt(row.mean_nondistinction, "%.6f") << ',' << fmt(row.kw.h, "%.6f") << ','
        << fmt(row.kw.p, "%.6g") << ',' << stats::to_string(row.tier) << '\n';
  }
}

void write_comparison_markdown(const ReportBundle& bundle, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "| N-gram | Avg in Distinction | Avg in Non-distinction | KW p-value |\n";
  out << "|---|---|---|---|\n";
  for (const stats::GroupComparison& row : bundle.comparison.rows) {
    std::string p = fmt(row.kw.p, "%.2E");
    if (row.tier == stats::Tier::Significant) {
      p = "**" + p + "**";
    } else if (row.tier == stats::Tier::Edge) {
      p = "*" + p + "*";
    }
    out << "| " << row.target << " | " << fmt(row.mean_distinction, "%.4f") << " | "
        << fmt(row.mean_nondistinction, "%.4f") << " | " << p << " |\n";
  }
}

void write_metadata(const ReportBundle& bundle, const std::string& path) {
  nlohmann::json doc(bundle.metadata);
  std::ofstream out = open_out(path);
  out << doc.dump(2) << '\n';
}

std::vector<std::string> render_tables(const ReportBundle& bundle, RenderFormat format,
                                       const std::string& out_dir) {
  const std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorKind::UnwritableOutput, "cannot create '" + out_dir + "': " + ec.message());
  }
  std::vector<std::string> files;
  auto emit = [&files](const std::filesystem::path& path, auto writer) {
    writer(path.string());
    files.push_back(path.string());
  };
  const bool delimited = format != RenderFormat::Markup;
  const bool markup = format != RenderFormat::Delimited;

  if (delimited) {
    emit(dir / "session_summary.csv",
         [&](const std::string& p) { write_session_summary(bundle, p); });
    emit(dir / "supports.csv", [&](const std::string& p) { write_supports(bundle, p); });
    emit(dir / "itemsets.csv", [&](const std::string& p) { write_itemsets(bundle, p); });
    emit(dir / "confidence.csv", [&](const std::string& p) { write_confidence(bundle, p); });
    emit(dir / "comparison.csv", [&](const std::string& p) { write_comparison_csv(bundle, p); });
  }
  emit(dir / "metadata.json", [&](const std::string& p) { write_metadata(bundle, p); });
  if (markup) {
    emit(dir / "comparison.md",
         [&](const std::string& p) { write_comparison_markdown(bundle, p); });
  }
  return files;
}

void write_diagnostics(const std::vector<session::CutoffDiagnosticsRow>& rows,
                       const std::string& path) {
  std::ofstream out = open_out(path);
  out << "cutoff_minutes,total_sessions,mean_actions_per_session,mean_inter_session_gap_minutes\n";
  for (const session::CutoffDiagnosticsRow& row : rows) {
    out << fmt(row.cutoff_minutes, "%.6g") << ',' << row.total_sessions << ','
        << fmt(row.mean_actions_per_session, "%.6f") << ','
        << fmt(row.mean_inter_session_gap_minutes, "%.6f") << '\n';
  }
}

void write_sessions_table(const std::vector<session::Session>& sessions, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "student_id,session_index,start,end,n_events,sequence\n";
  std::string previous_student;
  std::size_t index = 0;
  for (const session::Session& s : sessions) {
    if (s.student_id != previous_student) {
      previous_student = s.student_id;
      index = 0;
    }
    out << s.student_id << ',' << index << ',' << format_rfc3339(s.start) << ','
        << format_rfc3339(s.end) << ',' << s.events.size() << ','
        << patterns::to_string(patterns::compact(s, index).tokens) << '\n';
    ++index;
  }
}

}  // namespace seqmine::report
