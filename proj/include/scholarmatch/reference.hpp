#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scholarmatch/corpus.hpp"
#include "scholarmatch/matcher.hpp"
#include "scholarmatch/namekit.hpp"

namespace scholarmatch {

// Serial reference matcher. Same contract as the parallel engine, built the
// slow, obvious way: every candidate pair, every step in order, every
// variant combination, with projections constructed on the fly and no key
// indexes. Kept as the correctness oracle for the parallel path.

struct ReferenceEntity {
  std::string id;
  std::vector<std::string> tokens;
  std::vector<NameVariant> variants;
  std::string handle;  // tweeters only
};

struct PairwiseHit {
  int16_t author_variant = -1;
  int16_t tweeter_variant = -1;
  std::string author_value;
  std::string tweeter_value;
};

ReferenceEntity make_reference_author(const AuthorRecord& author, const HonorificSet& honorifics);
ReferenceEntity make_reference_tweeter(const TweeterProfile& tweeter,
                                       const HonorificSet& honorifics);

// Evaluates one step for one pair by nested variant scans.
std::optional<PairwiseHit> pairwise_step(const MatchStep& step, const ReferenceEntity& author,
                                         const ReferenceEntity& tweeter);

// Whole-corpus reference run. Guard-railed to small corpora; throws
// CorpusTooLarge beyond 1,000 authors or 1,000 tweeters.
RenderedOutcome brute_force_match(const Corpus& corpus,
                                  const HonorificSet& honorifics = default_honorifics(),
                                  uint16_t enabled_mask = kAllStepsMask);

}  // namespace scholarmatch
