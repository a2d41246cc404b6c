#pragma once

#include <string>
#include <vector>

#include "scholarmatch/corpus.hpp"
#include "scholarmatch/matcher.hpp"

namespace scholarmatch {

struct ConfusionCounts {
  size_t true_positives = 0;
  size_t false_positives = 0;
  size_t false_negatives = 0;
};

struct EvalReport {
  ConfusionCounts counts;
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
  // Zero-division conventions: precision = 1 when nothing was predicted
  // for golden tweeters, recall = 1 when the golden set is empty,
  // F = 0 when precision + recall = 0. Flagged when triggered.
  bool precision_defaulted = false;
  bool recall_defaulted = false;
  bool f_zeroed = false;
  // The precision population is restricted to pairs whose tweeter appears
  // in the golden set; the unrestricted view is reported alongside.
  size_t predicted_total = 0;
  size_t predicted_restricted = 0;
  double precision_unrestricted = 0.0;
};

// Harmonic mean of precision and recall; 0 when both are 0.
double f_score(double precision, double recall);

EvalReport evaluate(const std::vector<IdPair>& predicted, const std::vector<GoldenPair>& golden);

struct StepEvalRow {
  MatchStep step;
  StepCounts counts;  // distinct authors, distinct tweeters, pairs
  EvalReport eval;
};

// The three result tables: each criterion on its own ignoring the
// hierarchy, each step's new pairs only, and the running union through
// each step. Rows cover enabled steps only; `combined` covers the union.
struct EvalTables {
  std::vector<StepEvalRow> independent;
  std::vector<StepEvalRow> new_pairs;
  std::vector<StepEvalRow> cumulative;
  StepEvalRow combined;
};

EvalTables evaluate_per_step(const RenderedOutcome& outcome,
                             const std::vector<GoldenPair>& golden);

StepCounts count_distinct(const std::vector<IdPair>& pairs);

}  // namespace scholarmatch
