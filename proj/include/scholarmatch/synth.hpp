#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scholarmatch/corpus.hpp"

namespace scholarmatch {

struct SynthParams {
  uint64_t seed = 1;
  size_t authors = 100;
  size_t tweeters = 100;
  size_t events = 300;
  // Fraction of tweeters derived from authors (the planted truth); the
  // rest are distractors.
  double planted_fraction = 0.5;
  // Fraction of distractors that share a surname with a random author.
  double homonym_rate = 0.0;
  // Step classes planted tweeters are drawn from, cycled in order.
  std::vector<int> plant_classes = {1, 2, 3, 4, 5, 6, 7, 8, 9};
};

struct PlantedPair {
  std::string author_id;
  std::string tweeter_id;
  int intended_step = 0;
};

struct SyntheticCorpus {
  Corpus corpus;
  std::vector<PlantedPair> truth;
};

// Deterministic synthetic corpus: planted tweeters are rendered from their
// author's name through one of the nine step patterns and self-tweet at
// least one owned DOI; non-homonym distractors are resampled until none of
// their match keys collide with any author's, so they can never match.
SyntheticCorpus generate_synthetic_corpus(const SynthParams& params);  // throws InvalidParams

void write_truth_csv(const std::string& path, const std::vector<PlantedPair>& truth);

}  // namespace scholarmatch
