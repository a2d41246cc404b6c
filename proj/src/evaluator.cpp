#include "scholarmatch/evaluator.hpp"

#include <unordered_set>

namespace scholarmatch {

double f_score(double precision, double recall) {
  double sum = precision + recall;
  if (sum <= 0.0) return 0.0;
  return 2.0 * precision * recall / sum;
}

namespace {

std::string pair_key(const std::string& a, const std::string& t) { return a + '\x1f' + t; }

}  // namespace

EvalReport evaluate(const std::vector<IdPair>& predicted, const std::vector<GoldenPair>& golden) {
  std::unordered_set<std::string> golden_pairs;
  std::unordered_set<std::string> golden_tweeters;
  golden_pairs.reserve(golden.size());
  for (const auto& g : golden) {
    golden_pairs.insert(pair_key(g.author_id, g.tweeter_id));
    golden_tweeters.insert(g.tweeter_id);
  }

  std::unordered_set<std::string> seen;
  seen.reserve(predicted.size());
  size_t total = 0, restricted = 0, tp = 0;
  for (const auto& [author, tweeter] : predicted) {
    if (!seen.insert(pair_key(author, tweeter)).second) continue;
    ++total;
    if (!golden_tweeters.count(tweeter)) continue;
    ++restricted;
    if (golden_pairs.count(pair_key(author, tweeter))) ++tp;
  }

  EvalReport report;
  report.counts.true_positives = tp;
  report.counts.false_positives = restricted - tp;
  report.counts.false_negatives = golden_pairs.size() - tp;
  report.predicted_total = total;
  report.predicted_restricted = restricted;

  if (restricted == 0) {
    report.precision = 1.0;
    report.precision_defaulted = true;
  } else {
    report.precision = static_cast<double>(tp) / static_cast<double>(restricted);
  }
  if (golden_pairs.empty()) {
    report.recall = 1.0;
    report.recall_defaulted = true;
  } else {
    report.recall = static_cast<double>(tp) /
                    static_cast<double>(tp + report.counts.false_negatives);
  }
  report.f_score = f_score(report.precision, report.recall);
  report.f_zeroed = report.precision + report.recall <= 0.0;
  report.precision_unrestricted =
      total == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(total);
  return report;
}

StepCounts count_distinct(const std::vector<IdPair>& pairs) {
  std::unordered_set<std::string> authors, tweeters, uniq;
  for (const auto& [a, t] : pairs) {
    if (!uniq.insert(pair_key(a, t)).second) continue;
    authors.insert(a);
    tweeters.insert(t);
  }
  return {authors.size(), tweeters.size(), uniq.size()};
}

EvalTables evaluate_per_step(const RenderedOutcome& outcome,
                             const std::vector<GoldenPair>& golden) {
  EvalTables tables;
  for (const auto& step : match_steps()) {
    if (!(outcome.enabled_mask & (1u << (step.step_id - 1)))) continue;
    const auto& independent = outcome.independent[step.step_id - 1];
    tables.independent.push_back({step, count_distinct(independent), evaluate(independent, golden)});

    auto new_pairs = outcome.pairs_at_step(step.step_id);
    tables.new_pairs.push_back({step, count_distinct(new_pairs), evaluate(new_pairs, golden)});

    auto through = outcome.pairs_through_step(step.step_id);
    tables.cumulative.push_back({step, count_distinct(through), evaluate(through, golden)});
  }
  auto combined = outcome.combined_pairs();
  tables.combined = {MatchStep{0, Criteria::kFullNameExact, MatchField::kHandle},
                     count_distinct(combined), evaluate(combined, golden)};
  return tables;
}

}  // namespace scholarmatch
