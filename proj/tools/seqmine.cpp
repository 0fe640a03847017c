// seqmine: session and transition mining over multi-platform activity logs.
//
// Subcommands: ingest, sessionize, diagnose-cutoff, mine, compare, report,
// generate. Every stage reads the class config; intermediate artifacts are
// plain files so stages can be run and inspected independently.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <set>

#include "CLI11.hpp"

#include "seqmine/apriori.hpp"
#include "seqmine/config.hpp"
#include "seqmine/core.hpp"
#include "seqmine/ingest.hpp"
#include "seqmine/patterns.hpp"
#include "seqmine/report.hpp"
#include "seqmine/sessionize.hpp"
#include "seqmine/stats.hpp"
#include "seqmine/syngen.hpp"

namespace {

using namespace seqmine;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::string in_events;  // canonical merged event file, skips raw sources
  double cutoff = 0.0;    // 0 = use config
  double min_support = 0.0;
  std::string mode;  // "exact" | "contain"
  bool unordered = false;
};

config::ClassConfig load_config(const CommonArgs& args) {
  config::ClassConfig cfg = config::load_class_config(args.config_path);
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (args.cutoff > 0.0) {
    cfg.study_cutoff_minutes = args.cutoff;
    if (cfg.browser_cutoff_minutes > cfg.study_cutoff_minutes) {
      cfg.browser_cutoff_minutes = cfg.study_cutoff_minutes;
    }
  }
  if (args.min_support > 0.0) cfg.min_support = args.min_support;
  if (args.mode == "exact") cfg.support_mode = patterns::SupportMode::ExactSession;
  if (args.mode == "contain") cfg.support_mode = patterns::SupportMode::Containment;
  if (args.unordered) cfg.unordered_rules = true;
  config::validate(cfg);
  return cfg;
}

TransactionStream load_stream(const config::ClassConfig& cfg, const CommonArgs& args) {
  if (!args.in_events.empty()) {
    return report::load_canonical_events(args.in_events, cfg);
  }
  return report::ingest_stage(cfg);
}

std::filesystem::path ensure_out_dir(const config::ClassConfig& cfg) {
  std::filesystem::path dir(cfg.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorKind::UnwritableOutput, "cannot create '" + cfg.out_dir + "'");
  }
  return dir;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool with_mining = false) {
  cmd->add_option("--config", args.config_path, "class config file (JSON)")->required();
  cmd->add_option("--out", args.out_dir, "output directory (default from config)");
  cmd->add_option("--in", args.in_events, "canonical merged event file instead of raw sources");
  cmd->add_option("--cutoff", args.cutoff, "study cutoff override, minutes");
  if (with_mining) {
    cmd->add_option("--min-support", args.min_support, "apriori minimum support override");
    cmd->add_option("--mode", args.mode, "support mode: exact | contain")
        ->check(CLI::IsMember({"exact", "contain"}));
    cmd->add_flag("--unordered", args.unordered,
                  "rule joint support as plain co-occurrence instead of ordered");
  }
}

int cmd_ingest(const CommonArgs& args) {
  const config::ClassConfig cfg = load_config(args);
  const TransactionStream stream = load_stream(cfg, args);
  const auto dir = ensure_out_dir(cfg);
  report::write_canonical_events(stream, (dir / "events.csv").string());
  std::cout << "events=" << stream.events.size() << " students=" << stream.by_student.size()
            << " -> " << (dir / "events.csv").string() << "\n";
  return 0;
}

int cmd_sessionize(const CommonArgs& args) {
  const config::ClassConfig cfg = load_config(args);
  const TransactionStream stream = load_stream(cfg, args);
  const auto sessions = session::build_sessions(stream, cfg.study_cutoff_minutes);
  const auto dir = ensure_out_dir(cfg);
  report::write_sessions_table(sessions, (dir / "sessions.csv").string());
  std::cout << "sessions=" << sessions.size() << " cutoff=" << cfg.study_cutoff_minutes
            << "m -> " << (dir / "sessions.csv").string() << "\n";
  return 0;
}

int cmd_diagnose(const CommonArgs& args, const std::vector<double>& grid) {
  const config::ClassConfig cfg = load_config(args);
  const TransactionStream stream = load_stream(cfg, args);
  const auto rows = session::cutoff_diagnostics(stream, grid);
  const auto dir = ensure_out_dir(cfg);
  report::write_diagnostics(rows, (dir / "cutoff_diagnostics.csv").string());
  std::printf("%-14s %-14s %-22s %s\n", "cutoff_min", "sessions", "mean_actions", "mean_gap_min");
  for (const auto& row : rows) {
    std::printf("%-14g %-14zu %-22.4f %.4f\n", row.cutoff_minutes, row.total_sessions,
                row.mean_actions_per_session, row.mean_inter_session_gap_minutes);
  }
  return 0;
}

int cmd_report(const CommonArgs& args, const std::string& format) {
  const config::ClassConfig cfg = load_config(args);
  report::RenderFormat render = report::RenderFormat::Delimited;
  if (format == "markup") render = report::RenderFormat::Markup;
  if (format == "both") render = report::RenderFormat::Both;
  const report::ReportBundle bundle = report::run_pipeline(cfg);
  const auto files = report::render_tables(bundle, render, cfg.out_dir);
  for (const auto& f : files) std::cout << f << "\n";
  return 0;
}

int cmd_mine(const CommonArgs& args) {
  const config::ClassConfig cfg = load_config(args);
  const report::ReportBundle bundle = report::run_pipeline(cfg);
  const auto dir = ensure_out_dir(cfg);
  report::write_itemsets(bundle, (dir / "itemsets.csv").string());
  report::write_confidence(bundle, (dir / "confidence.csv").string());
  report::write_metadata(bundle, (dir / "metadata.json").string());
  std::cout << (dir / "itemsets.csv").string() << "\n"
            << (dir / "confidence.csv").string() << "\n"
            << (dir / "metadata.json").string() << "\n";
  return 0;
}

int cmd_compare(const CommonArgs& args) {
  const config::ClassConfig cfg = load_config(args);
  const report::ReportBundle bundle = report::run_pipeline(cfg);
  const auto dir = ensure_out_dir(cfg);
  report::write_supports(bundle, (dir / "supports.csv").string());
  report::write_comparison_csv(bundle, (dir / "comparison.csv").string());
  report::write_comparison_markdown(bundle, (dir / "comparison.md").string());
  report::write_metadata(bundle, (dir / "metadata.json").string());
  std::cout << (dir / "supports.csv").string() << "\n"
            << (dir / "comparison.csv").string() << "\n"
            << (dir / "comparison.md").string() << "\n"
            << (dir / "metadata.json").string() << "\n";
  return 0;
}

int cmd_generate(const std::string& profile_path, std::uint64_t seed, const std::string& out_dir,
                 bool noisy_gaps) {
  syngen::GeneratorSpec spec = config::load_generator_spec(profile_path);
  if (noisy_gaps) spec.noisy_gaps = true;
  const syngen::GeneratedClass generated = syngen::generate_class(spec, seed, out_dir);
  std::cout << "students=" << 2 * spec.n_per_group << " sessions=" << generated.manifest.size()
            << " platforms=" << generated.platforms << "\n";
  for (const auto& f : generated.event_files) std::cout << f << "\n";
  std::cout << generated.roster_file << "\n"
            << generated.manifest_file << "\n"
            << generated.config_file << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"session and transition mining over multi-platform activity logs"};
  app.require_subcommand(1);

  CommonArgs args;
  std::vector<double> grid;
  std::string format = "delimited";
  std::string profile_path;
  std::string generate_out;
  std::uint64_t seed = 1;

  CLI::App* ingest_cmd = app.add_subcommand("ingest", "parse, merge and filter the source logs");
  add_common(ingest_cmd, args);

  CLI::App* sessionize_cmd =
      app.add_subcommand("sessionize", "segment the stream into study sessions");
  add_common(sessionize_cmd, args);

  CLI::App* diagnose_cmd =
      app.add_subcommand("diagnose-cutoff", "session statistics over a cutoff grid");
  add_common(diagnose_cmd, args);
  diagnose_cmd->add_option("--grid", grid, "cutoff grid in minutes (comma separated)")
      ->required()
      ->delimiter(',');

  CLI::App* mine_cmd =
      app.add_subcommand("mine", "frequent itemsets and transition confidences per group");
  add_common(mine_cmd, args, true);

  CLI::App* compare_cmd =
      app.add_subcommand("compare", "per-student supports and group comparison tables");
  add_common(compare_cmd, args, true);

  CLI::App* report_cmd = app.add_subcommand("report", "run the full pipeline");
  add_common(report_cmd, args, true);
  report_cmd->add_option("--format", format, "delimited | markup | both")
      ->check(CLI::IsMember({"delimited", "markup", "both"}));

  CLI::App* generate_cmd = app.add_subcommand("generate", "write a synthetic class");
  bool noisy_gaps = false;
  generate_cmd->add_option("--config", profile_path, "generator profile file (JSON)")->required();
  generate_cmd->add_option("--seed", seed, "master seed")->required();
  generate_cmd->add_option("--out", generate_out, "output directory")->required();
  generate_cmd->add_flag("--noisy-gaps", noisy_gaps,
                         "skip the gap/cutoff separation checks (robustness testing)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest_cmd->parsed()) return cmd_ingest(args);
    if (sessionize_cmd->parsed()) return cmd_sessionize(args);
    if (diagnose_cmd->parsed()) return cmd_diagnose(args, grid);
    if (mine_cmd->parsed()) return cmd_mine(args);
    if (compare_cmd->parsed()) return cmd_compare(args);
    if (report_cmd->parsed()) return cmd_report(args, format);
    if (generate_cmd->parsed()) return cmd_generate(profile_path, seed, generate_out, noisy_gaps);
  } catch (const seqmine::Error& e) {
    std::cerr << "seqmine: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "seqmine: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
