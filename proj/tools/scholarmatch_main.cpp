// scholarmatch: link scholarly authors to the social accounts that tweeted
// their publications, evaluate against a golden pair set, and render the
// result tables.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scholarmatch/errors.hpp"
#include "scholarmatch/pipeline.hpp"
#include "scholarmatch/version.hpp"

using namespace scholarmatch;

int main(int argc, char** argv) {
  CLI::App app{"scholarmatch: author / tweeter record linkage over DOI-blocked candidates"};
  app.set_version_flag("--version", kVersion);
  app.fallthrough(true);
  app.set_config("--config", "", "flat key=value configuration file");
  app.require_subcommand(1);

  PipelineConfig config;
  double planted_fraction = config.synth.planted_fraction;
  double homonym_rate = config.synth.homonym_rate;

  auto opt = [&](CLI::Option* o, const char* env) { return o->envname(env); };
  opt(app.add_option("--authors", config.inputs.authors, "authors CSV"), "SCHOLARMATCH_AUTHORS");
  opt(app.add_option("--works", config.inputs.works, "works JSONL"), "SCHOLARMATCH_WORKS");
  opt(app.add_option("--events", config.inputs.events, "tweet events CSV"), "SCHOLARMATCH_EVENTS");
  opt(app.add_option("--tweeters", config.inputs.tweeters, "tweeter profiles CSV"),
      "SCHOLARMATCH_TWEETERS");
  opt(app.add_option("--golden", config.inputs.golden, "golden pairs CSV"), "SCHOLARMATCH_GOLDEN");
  opt(app.add_option("--out", config.out_dir, "output directory"), "SCHOLARMATCH_OUT");
  opt(app.add_option("--workers", config.workers, "worker threads (0 = all cores)"),
      "SCHOLARMATCH_WORKERS");
  opt(app.add_option("--disable-step", config.disabled_steps,
                     "step id (1-9) to disable; repeatable; order is never changed"),
      "SCHOLARMATCH_DISABLE_STEP");
  opt(app.add_option("--top-countries", config.top_countries,
                     "named rows in the country table before the rest collapse"),
      "SCHOLARMATCH_TOP_COUNTRIES");
  opt(app.add_option("--honorifics", config.honorifics_override,
                     "override the honorific token list"),
      "SCHOLARMATCH_HONORIFICS");
  opt(app.add_option("--dump-variants", config.dump_variants_path,
                     "write the expanded name variants to this CSV"),
      "SCHOLARMATCH_DUMP_VARIANTS");
  opt(app.add_option("--seed", config.synth.seed, "seed for synth / oracle-check"),
      "SCHOLARMATCH_SEED");
  opt(app.add_option("--synth-authors", config.synth.authors, "synthetic author count"),
      "SCHOLARMATCH_SYNTH_AUTHORS");
  opt(app.add_option("--synth-tweeters", config.synth.tweeters, "synthetic tweeter count"),
      "SCHOLARMATCH_SYNTH_TWEETERS");
  opt(app.add_option("--synth-events", config.synth.events, "synthetic event count"),
      "SCHOLARMATCH_SYNTH_EVENTS");
  opt(app.add_option("--planted-fraction", planted_fraction,
                     "fraction of synthetic tweeters derived from authors"),
      "SCHOLARMATCH_PLANTED_FRACTION");
  opt(app.add_option("--homonym-rate", homonym_rate,
                     "fraction of distractors sharing an author surname"),
      "SCHOLARMATCH_HOMONYM_RATE");
  opt(app.add_flag("--quiet", config.quiet, "suppress progress output"), "SCHOLARMATCH_QUIET");

  app.add_subcommand("ingest", "load and validate the input files, write the load report");
  app.add_subcommand("match", "ingest, generate candidates, run the step hierarchy");
  app.add_subcommand("evaluate", "match, then score against the golden set");
  app.add_subcommand("report", "evaluate, then render every result table");
  app.add_subcommand("all", "the whole pipeline");
  app.add_subcommand("synth", "write a synthetic corpus with planted ground truth");
  app.add_subcommand("oracle-check",
                     "match a synthetic corpus with both engines and compare exactly");

  CLI11_PARSE(app, argc, argv);
  config.synth.planted_fraction = planted_fraction;
  config.synth.homonym_rate = homonym_rate;

  std::string sub = app.get_subcommands().front()->get_name();
  try {
    if (sub == "ingest") run_ingest(config);
    else if (sub == "match") run_match(config);
    else if (sub == "evaluate") run_evaluate(config);
    else if (sub == "report") run_report(config);
    else if (sub == "all") run_all(config);
    else if (sub == "synth") run_synth(config);
    else if (sub == "oracle-check") {
      if (!run_oracle_check(config)) return kExitOracleMismatch;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const InvalidParams& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error (" << sub << "): " << e.what() << "\n";
    return kExitStageError;
  }
  return kExitOk;
}
