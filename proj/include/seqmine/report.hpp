#pragma once

#include <map>
#include <string>
#include <vector>

#include "seqmine/apriori.hpp"
#include "seqmine/config.hpp"
#include "seqmine/core.hpp"
#include "seqmine/patterns.hpp"
#include "seqmine/sessionize.hpp"
#include "seqmine/stats.hpp"

// Pipeline orchestration (ingest -> sessionize -> patterns -> apriori ->
// stats) and emission of the report tables.

namespace seqmine::report {

inline constexpr const char* kToolVersion = "1.0.0";

struct SessionSummaryRow {
  Group group = Group::Distinction;
  std::size_t students = 0;  // students with at least one session
  std::size_t sessions = 0;
  std::size_t events = 0;
};

struct ReportBundle {
  std::vector<SessionSummaryRow> session_summary;
  std::vector<patterns::SupportRecord> supports;
  std::map<Group, std::vector<apriori::FrequentItemset>> itemsets;
  std::vector<apriori::AssociationRule> confidences;
  stats::ComparisonTable comparison;
  std::string config_hash;
  std::map<std::string, std::string> metadata;  // run/mode flags, sorted
};

// Parses all sources, merges and applies the exclude list. Errors are
// prefixed with the failing stage.
TransactionStream ingest_stage(const config::ClassConfig& cfg);

// Canonical merged event file (header student_id,timestamp,platform,action;
// platform column holds class letters).
void write_canonical_events(const TransactionStream& stream, const std::string& path);
TransactionStream load_canonical_events(const std::string& path, const config::ClassConfig& cfg);

// Runs the full pipeline at the study cutoff. Re-running with identical
// inputs and config yields an identical bundle.
ReportBundle run_pipeline(const config::ClassConfig& cfg);

enum class RenderFormat { Delimited, Markup, Both };

// Writes the bundle's tables under out_dir and returns the file paths.
// Markup mode renders the comparison table with the significance typography
// (bold p < 0.05, italic p < 0.1).
std::vector<std::string> render_tables(const ReportBundle& bundle, RenderFormat format,
                                       const std::string& out_dir);

// Single-table writers used by the stage subcommands.
void write_session_summary(const ReportBundle& bundle, const std::string& path);
void write_supports(const ReportBundle& bundle, const std::string& path);
void write_itemsets(const ReportBundle& bundle, const std::string& path);
void write_confidence(const ReportBundle& bundle, const std::string& path);
void write_comparison_csv(const ReportBundle& bundle, const std::string& path);
void write_comparison_markdown(const ReportBundle& bundle, const std::string& path);
void write_metadata(const ReportBundle& bundle, const std::string& path);

// Cutoff diagnostics as a delimited table.
void write_diagnostics(const std::vector<session::CutoffDiagnosticsRow>& rows,
                       const std::string& path);

void write_sessions_table(const std::vector<session::Session>& sessions, const std::string& path);

}  // namespace seqmine::report
