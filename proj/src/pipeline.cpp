#include "scholarmatch/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "scholarmatch/csv.hpp"
#include "scholarmatch/errors.hpp"
#include "scholarmatch/reference.hpp"
#include "scholarmatch/reporter.hpp"
#include "scholarmatch/util.hpp"
#include "scholarmatch/version.hpp"

namespace scholarmatch {

namespace fs = std::filesystem;
using nlohmann::json;

HonorificSet effective_honorifics(const PipelineConfig& config) {
  if (config.honorifics_override.empty()) return default_honorifics();
  return make_honorifics(config.honorifics_override);
}

MatchedCorpus match_corpus(const Corpus& corpus, const HonorificSet& honorifics, int workers,
                           uint16_t enabled_mask) {
  MatchedCorpus result;
  result.forms = build_forms(corpus, honorifics, workers);
  DoiIndex index = build_doi_index(corpus.works, corpus.events);
  result.candidates = generate_candidates(index);
  auto refs = to_candidate_refs(result.candidates, result.forms);
  MatchOptions options;
  options.workers = workers;
  options.enabled_mask = enabled_mask;
  MatchOutcome outcome = run_hierarchy(result.forms, refs, options);
  validate_outcome(outcome);
  result.outcome = render_outcome(outcome, result.forms);
  return result;
}

namespace {

struct StageClock {
  std::vector<std::pair<std::string, double>> wall_ms;

  template <typename F>
  auto time(const std::string& name, F&& fn) {
    StopWatch watch;
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      wall_ms.emplace_back(name, watch.elapsed_ms());
    } else {
      auto value = fn();
      wall_ms.emplace_back(name, watch.elapsed_ms());
      return value;
    }
  }
};

std::string out_path(const PipelineConfig& config, const char* name) {
  return (fs::path(config.out_dir) / name).string();
}

void ensure_out_dir(const PipelineConfig& config) {
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + config.out_dir);
}

uint64_t checksum_or_zero(const std::string& path) {
  try {
    return fnv1a64_file(path);
  } catch (const FileMissing&) {
    return 0;
  }
}

json config_echo(const PipelineConfig& config) {
  json j;
  j["inputs"] = {{"authors", config.inputs.authors},
                 {"works", config.inputs.works},
                 {"events", config.inputs.events},
                 {"tweeters", config.inputs.tweeters},
                 {"golden", config.inputs.golden}};
  j["out_dir"] = config.out_dir;
  j["workers"] = config.workers;
  j["top_countries"] = config.top_countries;
  j["disabled_steps"] = config.disabled_steps;
  j["honorifics"] = config.honorifics_override.empty()
                        ? default_honorific_list()
                        : config.honorifics_override;
  j["synth"] = {{"seed", config.synth.seed},
                {"authors", config.synth.authors},
                {"tweeters", config.synth.tweeters},
                {"events", config.synth.events},
                {"planted_fraction", config.synth.planted_fraction},
                {"homonym_rate", config.synth.homonym_rate},
                {"plant_classes", config.synth.plant_classes}};
  return j;
}

// The manifest records everything needed to replicate the run. Timestamps
// and wall times vary run to run; all other artifacts are deterministic.
void write_manifest(const PipelineConfig& config, const std::string& subcommand,
                    const StageClock& clock, const PipelineResult* result) {
  json j;
  j["tool"] = "scholarmatch";
  j["version"] = kVersion;
  j["subcommand"] = subcommand;
  auto now = std::chrono::system_clock::now();
  j["timestamp_unix_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count();
  j["config"] = config_echo(config);
  json checksums;
  checksums["authors"] = to_hex(checksum_or_zero(config.inputs.authors));
  checksums["works"] = to_hex(checksum_or_zero(config.inputs.works));
  checksums["events"] = to_hex(checksum_or_zero(config.inputs.events));
  checksums["tweeters"] = to_hex(checksum_or_zero(config.inputs.tweeters));
  checksums["golden"] = to_hex(checksum_or_zero(config.inputs.golden));
  j["input_checksums_fnv1a64"] = checksums;
  json stages = json::array();
  for (const auto& [name, ms] : clock.wall_ms) {
    stages.push_back({{"stage", name}, {"wall_ms", ms}});
  }
  j["stages"] = stages;
  if (result) {
    json rows;
    for (const auto& f : result->load_report.files) rows[f.name] = f.loaded;
    j["row_counts"] = rows;
    j["skipped_rows"] = [&] {
      json s;
      for (const auto& f : result->load_report.files) s[f.name] = f.skipped;
      return s;
    }();
    j["match"] = {{"candidates", result->candidate_count},
                  {"matched_pairs", result->outcome.rows.size()},
                  {"authors_empty_name", result->forms_stats.authors_empty_name},
                  {"authors_single_token", result->forms_stats.authors_single_token},
                  {"tweeters_empty_handle", result->forms_stats.tweeters_empty_handle},
                  {"tweeters_empty_profile", result->forms_stats.tweeters_empty_profile}};
  }
  write_file(out_path(config, kManifestJson), j.dump(2) + "\n");
}

void dump_variants(const std::string& path, const FormsTables& forms) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_csv_row(out, {"owner_id", "kind", "first_name", "last_name", "initials", "first_initial",
                      "first_token"});
  for (const auto& a : forms.authors) {
    for (const auto& v : a.variants) {
      write_csv_row(out, {v.owner_id, "author", v.first_name, v.last_name, v.initials,
                          std::string(1, v.first_initial), v.first_token});
    }
  }
  for (const auto& t : forms.tweeters) {
    for (const auto& v : t.variants) {
      write_csv_row(out, {v.owner_id, "tweeter", v.first_name, v.last_name, v.initials,
                          std::string(1, v.first_initial), v.first_token});
    }
  }
}

json eval_row_json(const StepEvalRow& row, bool combined) {
  json j;
  if (combined) {
    j["criteria"] = "combined";
    j["field"] = "combined";
  } else {
    j["step_id"] = row.step.step_id;
    j["criteria"] = criteria_token(row.step.criteria);
    j["field"] = field_token(row.step.field);
  }
  j["authors"] = row.counts.authors;
  j["tweeters"] = row.counts.tweeters;
  j["pairs"] = row.counts.pairs;
  j["true_positives"] = row.eval.counts.true_positives;
  j["false_positives"] = row.eval.counts.false_positives;
  j["false_negatives"] = row.eval.counts.false_negatives;
  j["recall"] = row.eval.recall;
  j["precision"] = row.eval.precision;
  j["f_score"] = row.eval.f_score;
  j["precision_defaulted"] = row.eval.precision_defaulted;
  j["recall_defaulted"] = row.eval.recall_defaulted;
  j["f_zeroed"] = row.eval.f_zeroed;
  j["predicted_total_unrestricted"] = row.eval.predicted_total;
  j["predicted_restricted"] = row.eval.predicted_restricted;
  j["precision_unrestricted"] = row.eval.precision_unrestricted;
  return j;
}

void write_eval_summary(const PipelineConfig& config, const EvalTables& tables) {
  json j;
  auto table_json = [](const std::vector<StepEvalRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) arr.push_back(eval_row_json(r, false));
    return arr;
  };
  j["per_criterion"] = table_json(tables.independent);
  j["new_pairs"] = table_json(tables.new_pairs);
  j["cumulative"] = table_json(tables.cumulative);
  j["combined"] = eval_row_json(tables.combined, true);
  write_file(out_path(config, kEvalSummaryJson), j.dump(2) + "\n");
}

enum class Stage { kIngest, kMatch, kEvaluate, kReport };

PipelineResult run_stages(const PipelineConfig& config, Stage through, const char* subcommand) {
  ensure_out_dir(config);
  StageClock clock;
  PipelineResult result;

  Corpus corpus = clock.time("ingest", [&] { return load_corpus(config.inputs, &result.load_report); });
  write_file(out_path(config, kLoadReportJson), result.load_report.to_json());
  if (!config.quiet) std::cout << result.load_report.to_text();

  if (through >= Stage::kMatch) {
    HonorificSet honorifics = effective_honorifics(config);
    uint16_t mask = steps_mask_without(config.disabled_steps);
    MatchedCorpus matched = clock.time("match", [&] {
      return match_corpus(corpus, honorifics, config.workers, mask);
    });
    result.forms_stats = matched.forms.stats;
    result.candidate_count = matched.candidates.size();
    result.outcome = std::move(matched.outcome);
    if (!config.dump_variants_path.empty()) dump_variants(config.dump_variants_path, matched.forms);
    clock.time("export_matches", [&] {
      write_matches_csv(out_path(config, kMatchesCsv), result.outcome);
    });
    if (!config.quiet) {
      std::cout << "match: " << result.candidate_count << " candidates, "
                << result.outcome.rows.size() << " matched pairs\n";
    }

    if (through >= Stage::kEvaluate) {
      clock.time("evaluate", [&] { result.eval = evaluate_per_step(result.outcome, corpus.golden); });
      write_eval_table_csv(out_path(config, kPerCriterionCsv), result.eval.independent,
                           &result.eval.combined);
      write_eval_table_csv(out_path(config, kNewPairsCsv), result.eval.new_pairs,
                           &result.eval.combined);
      write_eval_table_csv(out_path(config, kCumulativeCsv), result.eval.cumulative,
                           &result.eval.combined);
      write_eval_summary(config, result.eval);
      if (!config.quiet) {
        const auto& c = result.eval.combined.eval;
        std::cout << "evaluate: P=" << fmt_rate(c.precision) << " R=" << fmt_rate(c.recall)
                  << " F=" << fmt_rate(c.f_score) << " (TP=" << c.counts.true_positives
                  << " FP=" << c.counts.false_positives << " FN=" << c.counts.false_negatives
                  << ")\n";
      }
    }

    if (through >= Stage::kReport) {
      clock.time("report", [&] {
        std::vector<std::string> matched_authors;
        {
          std::unordered_set<std::string> seen;
          for (const auto& row : result.outcome.rows) {
            if (seen.insert(row.author_id).second) matched_authors.push_back(row.author_id);
          }
        }
        auto disciplines = discipline_summary(matched_authors, corpus.works);
        auto countries = country_summary(matched_authors, corpus.authors, config.top_countries);
        write_discipline_csv(out_path(config, kDisciplinesCsv), disciplines);
        write_discipline_txt(out_path(config, "table_disciplines.txt"), disciplines);
        write_country_csv(out_path(config, kCountriesCsv), countries);
        write_country_txt(out_path(config, "table_countries.txt"), countries);
        write_eval_table_txt(out_path(config, "table_per_criterion.txt"),
                             "Results of the matching for each criterion",
                             result.eval.independent, &result.eval.combined);
        write_eval_table_txt(out_path(config, "table_new_pairs.txt"),
                             "New matches identified at each step", result.eval.new_pairs,
                             &result.eval.combined);
        write_eval_table_txt(out_path(config, "table_cumulative.txt"),
                             "Cumulative matches at each step", result.eval.cumulative,
                             &result.eval.combined);
        json j;
        j["matched_authors"] = matched_authors.size();
        j["disciplines_assigned"] = disciplines.assigned_total;
        j["disciplines_excluded_no_level0"] = disciplines.excluded_no_concepts;
        j["countries_base"] = countries.base_total;
        j["countries_unknown"] = countries.unknown;
        write_file(out_path(config, kReportSummaryJson), j.dump(2) + "\n");
      });
    }
  }

  write_manifest(config, subcommand, clock, &result);
  return result;
}

}  // namespace

PipelineResult run_ingest(const PipelineConfig& config) {
  return run_stages(config, Stage::kIngest, "ingest");
}

PipelineResult run_match(const PipelineConfig& config) {
  return run_stages(config, Stage::kMatch, "match");
}

PipelineResult run_evaluate(const PipelineConfig& config) {
  return run_stages(config, Stage::kEvaluate, "evaluate");
}

PipelineResult run_report(const PipelineConfig& config) {
  return run_stages(config, Stage::kReport, "report");
}

PipelineResult run_all(const PipelineConfig& config) {
  return run_stages(config, Stage::kReport, "all");
}

void run_synth(const PipelineConfig& config) {
  ensure_out_dir(config);
  StageClock clock;
  SyntheticCorpus synth = clock.time("synth", [&] { return generate_synthetic_corpus(config.synth); });
  CorpusPaths paths;
  paths.authors = out_path(config, "authors.csv");
  paths.works = out_path(config, "works.jsonl");
  paths.events = out_path(config, "events.csv");
  paths.tweeters = out_path(config, "tweeters.csv");
  paths.golden = out_path(config, "golden.csv");
  write_corpus_files(synth.corpus, paths);
  write_truth_csv(out_path(config, "truth.csv"), synth.truth);
  if (!config.quiet) {
    std::cout << "synth: " << synth.corpus.authors.size() << " authors, "
              << synth.corpus.tweeters.size() << " tweeters, " << synth.corpus.events.size()
              << " events, " << synth.truth.size() << " planted pairs -> " << config.out_dir
              << "\n";
  }
  PipelineConfig manifest_config = config;
  manifest_config.inputs = paths;
  write_manifest(manifest_config, "synth", clock, nullptr);
}

bool run_oracle_check(const PipelineConfig& config) {
  ensure_out_dir(config);
  StageClock clock;
  SyntheticCorpus synth = clock.time("synth", [&] { return generate_synthetic_corpus(config.synth); });
  HonorificSet honorifics = effective_honorifics(config);
  uint16_t mask = steps_mask_without(config.disabled_steps);

  MatchedCorpus fast = clock.time("match", [&] {
    return match_corpus(synth.corpus, honorifics, config.workers, mask);
  });
  RenderedOutcome slow = clock.time("reference", [&] {
    return brute_force_match(synth.corpus, honorifics, mask);
  });

  std::string diff;
  bool equal = rendered_equal(fast.outcome, slow, &diff);
  write_manifest(config, "oracle-check", clock, nullptr);
  if (!config.quiet) {
    if (equal) {
      std::cout << "oracle-check seed " << config.synth.seed << ": EQUAL ("
                << fast.outcome.rows.size() << " pairs)\n";
    } else {
      std::cout << "oracle-check seed " << config.synth.seed << ": MISMATCH\n" << diff;
    }
  }
  return equal;
}

}  // namespace scholarmatch
