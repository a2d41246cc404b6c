// Benchmark: the parallel matching engine against the serial reference, on
// seeded synthetic corpora. At reference-sized corpora both engines run and
// results are compared; above the reference guard rail only the parallel
// engine is timed across thread counts.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scholarmatch/pipeline.hpp"
#include "scholarmatch/reference.hpp"
#include "scholarmatch/synth.hpp"
#include "scholarmatch/util.hpp"

using namespace scholarmatch;

namespace {

struct BenchCase {
  size_t authors;
  size_t tweeters;
  size_t events;
};

double time_parallel(const Corpus& corpus, int workers, size_t* pairs) {
  StopWatch watch;
  auto matched = match_corpus(corpus, default_honorifics(), workers, kAllStepsMask);
  *pairs = matched.outcome.rows.size();
  return watch.elapsed_ms();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bench_match: parallel engine vs serial reference"};
  uint64_t seed = 42;
  int max_threads = 8;
  double homonym_rate = 0.1;
  app.add_option("--seed", seed, "corpus seed");
  app.add_option("--max-threads", max_threads, "highest thread count to time");
  app.add_option("--homonym-rate", homonym_rate, "distractor homonym rate");
  CLI11_PARSE(app, argc, argv);

  std::printf("%-28s %10s %12s %12s %8s\n", "corpus", "pairs", "serial_ms", "parallel_ms",
              "threads");

  // Reference-sized corpora: compare results and time both engines.
  for (BenchCase c : {BenchCase{200, 200, 400}, BenchCase{500, 500, 1000},
                      BenchCase{1000, 1000, 2000}}) {
    SynthParams params;
    params.seed = seed;
    params.authors = c.authors;
    params.tweeters = c.tweeters;
    params.events = c.events;
    params.homonym_rate = homonym_rate;
    auto synth = generate_synthetic_corpus(params);

    StopWatch serial_watch;
    auto reference = brute_force_match(synth.corpus);
    double serial_ms = serial_watch.elapsed_ms();

    size_t pairs = 0;
    double parallel_ms = time_parallel(synth.corpus, 0, &pairs);

    auto fast = match_corpus(synth.corpus, default_honorifics(), 0, kAllStepsMask);
    std::string diff;
    bool equal = rendered_equal(fast.outcome, reference, &diff);

    char label[64];
    std::snprintf(label, sizeof(label), "%zux%zu (%zu events)%s", c.authors, c.tweeters, c.events,
                  equal ? "" : " MISMATCH");
    std::printf("%-28s %10zu %12.1f %12.1f %8s\n", label, pairs, serial_ms, parallel_ms, "auto");
    if (!equal) {
      std::printf("%s\n", diff.c_str());
      return 1;
    }
  }

  // Larger corpus: parallel scaling only.
  SynthParams params;
  params.seed = seed;
  params.authors = 20000;
  params.tweeters = 20000;
  params.events = 100000;
  params.homonym_rate = homonym_rate;
  auto synth = generate_synthetic_corpus(params);
  for (int threads = 1; threads <= max_threads; threads *= 2) {
    size_t pairs = 0;
    double ms = time_parallel(synth.corpus, threads, &pairs);
    char label[64];
    std::snprintf(label, sizeof(label), "%zux%zu (%zu events)", params.authors, params.tweeters,
                  params.events);
    std::printf("%-28s %10zu %12s %12.1f %8d\n", label, pairs, "-", ms, threads);
  }
  return 0;
}
