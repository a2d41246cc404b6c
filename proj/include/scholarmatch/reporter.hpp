#pragma once

#include <string>
#include <vector>

#include "scholarmatch/corpus.hpp"
#include "scholarmatch/evaluator.hpp"
#include "scholarmatch/matcher.hpp"

namespace scholarmatch {

struct DisciplineRow {
  std::string discipline;  // level-0 concept name
  size_t author_count = 0;
  double author_percentage = 0.0;
  double average_score = 0.0;
};

struct DisciplineSummary {
  std::vector<DisciplineRow> rows;  // sorted by count desc, then name
  size_t assigned_total = 0;
  size_t excluded_no_concepts = 0;  // matched authors with no level-0 signal
};

// Assigns each matched author to the level-0 concept with the highest
// summed score over their works (ties to the lexicographically first
// name). The average score is the mean, over a discipline's authors, of
// the author's summed score for it divided by the author's work count.
DisciplineSummary discipline_summary(const std::vector<std::string>& matched_authors,
                                     const std::vector<WorkRecord>& works);

struct CountryRow {
  std::string country;  // ISO code or "Other countries"
  size_t author_count = 0;
  double author_percentage = 0.0;
};

struct CountrySummary {
  std::vector<CountryRow> rows;  // top_n rows plus an "Other countries" row
  size_t base_total = 0;         // matched authors with a known country
  size_t unknown = 0;            // excluded from the percentage base
};

CountrySummary country_summary(const std::vector<std::string>& matched_authors,
                               const std::vector<AuthorRecord>& authors, size_t top_n);

// Fixed numeric formats: counts as plain integers, rates to 3 decimals,
// percentages to 1 decimal.
std::string fmt_rate(double v);
std::string fmt_pct(double v);

void write_eval_table_csv(const std::string& path, const std::vector<StepEvalRow>& rows,
                          const StepEvalRow* combined);
void write_eval_table_txt(const std::string& path, const std::string& title,
                          const std::vector<StepEvalRow>& rows, const StepEvalRow* combined);
void write_discipline_csv(const std::string& path, const DisciplineSummary& summary);
void write_discipline_txt(const std::string& path, const DisciplineSummary& summary);
void write_country_csv(const std::string& path, const CountrySummary& summary);
void write_country_txt(const std::string& path, const CountrySummary& summary);

}  // namespace scholarmatch
