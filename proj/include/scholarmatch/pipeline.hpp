#pragma once

#include <string>
#include <vector>

#include "scholarmatch/corpus.hpp"
#include "scholarmatch/evaluator.hpp"
#include "scholarmatch/matcher.hpp"
#include "scholarmatch/synth.hpp"

namespace scholarmatch {

struct PipelineConfig {
  CorpusPaths inputs;
  std::string out_dir = "out";
  int workers = 0;  // 0 = all hardware threads
  size_t top_countries = 19;
  std::vector<int> disabled_steps;
  std::vector<std::string> honorifics_override;  // empty = built-in list
  std::string dump_variants_path;                // optional debug export
  SynthParams synth;
  bool quiet = false;
};

// Artifact basenames under out_dir.
inline constexpr const char* kMatchesCsv = "matches.csv";
inline constexpr const char* kLoadReportJson = "load_report.json";
inline constexpr const char* kManifestJson = "manifest.json";
inline constexpr const char* kEvalSummaryJson = "eval_summary.json";
inline constexpr const char* kReportSummaryJson = "report_summary.json";
inline constexpr const char* kPerCriterionCsv = "table_per_criterion.csv";
inline constexpr const char* kNewPairsCsv = "table_new_pairs.csv";
inline constexpr const char* kCumulativeCsv = "table_cumulative.csv";
inline constexpr const char* kDisciplinesCsv = "table_disciplines.csv";
inline constexpr const char* kCountriesCsv = "table_countries.csv";

// In-memory results of a full pipeline run over loaded inputs.
struct PipelineResult {
  LoadReport load_report;
  FormsStats forms_stats;
  size_t candidate_count = 0;
  RenderedOutcome outcome;
  EvalTables eval;
};

HonorificSet effective_honorifics(const PipelineConfig& config);

// Stage drivers. Each later stage runs the earlier ones; artifacts land in
// config.out_dir and a run manifest is always written.
PipelineResult run_ingest(const PipelineConfig& config);
PipelineResult run_match(const PipelineConfig& config);
PipelineResult run_evaluate(const PipelineConfig& config);
PipelineResult run_report(const PipelineConfig& config);
PipelineResult run_all(const PipelineConfig& config);

// Writes a synthetic corpus (plus its planted-truth file) into out_dir.
void run_synth(const PipelineConfig& config);

// Generates a synthetic corpus, matches it with both engines, and compares.
// Returns true when they agree; the verdict is also printed.
bool run_oracle_check(const PipelineConfig& config);

// Matches an already-loaded corpus without touching the filesystem.
// The workhorse behind run_match and the test suites.
struct MatchedCorpus {
  FormsTables forms;
  std::vector<CandidatePair> candidates;
  RenderedOutcome outcome;
};
MatchedCorpus match_corpus(const Corpus& corpus, const HonorificSet& honorifics, int workers,
                           uint16_t enabled_mask);

}  // namespace scholarmatch
