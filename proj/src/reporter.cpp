#include "scholarmatch/reporter.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "scholarmatch/csv.hpp"
#include "scholarmatch/errors.hpp"

namespace scholarmatch {

std::string fmt_rate(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string fmt_pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

DisciplineSummary discipline_summary(const std::vector<std::string>& matched_authors,
                                     const std::vector<WorkRecord>& works) {
  std::unordered_set<std::string> matched(matched_authors.begin(), matched_authors.end());

  struct AuthorConcepts {
    std::map<std::string, double> level0_sums;
    size_t work_count = 0;
  };
  std::unordered_map<std::string, AuthorConcepts> per_author;
  per_author.reserve(matched.size());
  for (const auto& w : works) {
    for (const auto& id : w.author_ids) {
      if (!matched.count(id)) continue;
      auto& entry = per_author[id];
      ++entry.work_count;
      for (const auto& c : w.concepts) {
        if (c.level == 0) entry.level0_sums[c.concept_name] += c.score;
      }
    }
  }

  struct Acc {
    size_t count = 0;
    double score_sum = 0.0;
  };
  std::map<std::string, Acc> by_discipline;
  DisciplineSummary summary;
  for (const auto& id : matched) {
    auto it = per_author.find(id);
    if (it == per_author.end() || it->second.level0_sums.empty()) {
      ++summary.excluded_no_concepts;
      continue;
    }
    // Argmax by summed score; the map's name order breaks ties.
    const std::string* best = nullptr;
    double best_score = -1.0;
    for (const auto& [name, sum] : it->second.level0_sums) {
      if (sum > best_score) {
        best = &name;
        best_score = sum;
      }
    }
    auto& acc = by_discipline[*best];
    ++acc.count;
    acc.score_sum += best_score / static_cast<double>(it->second.work_count);
    ++summary.assigned_total;
  }

  for (const auto& [name, acc] : by_discipline) {
    DisciplineRow row;
    row.discipline = name;
    row.author_count = acc.count;
    row.author_percentage =
        100.0 * static_cast<double>(acc.count) / static_cast<double>(summary.assigned_total);
    row.average_score = acc.score_sum / static_cast<double>(acc.count);
    summary.rows.push_back(std::move(row));
  }
  std::sort(summary.rows.begin(), summary.rows.end(),
            [](const DisciplineRow& a, const DisciplineRow& b) {
              if (a.author_count != b.author_count) return a.author_count > b.author_count;
              return a.discipline < b.discipline;
            });
  return summary;
}

CountrySummary country_summary(const std::vector<std::string>& matched_authors,
                               const std::vector<AuthorRecord>& authors, size_t top_n) {
  std::unordered_set<std::string> matched(matched_authors.begin(), matched_authors.end());
  std::map<std::string, size_t> counts;
  CountrySummary summary;
  for (const auto& a : authors) {
    if (!matched.count(a.author_id)) continue;
    if (a.country.empty()) {
      ++summary.unknown;
    } else {
      ++counts[a.country];
      ++summary.base_total;
    }
  }

  std::vector<std::pair<std::string, size_t>> ordered(counts.begin(), counts.end());
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  size_t other = 0;
  for (size_t i = 0; i < ordered.size(); ++i) {
    if (i < top_n) {
      CountryRow row;
      row.country = ordered[i].first;
      row.author_count = ordered[i].second;
      row.author_percentage = 100.0 * static_cast<double>(ordered[i].second) /
                              static_cast<double>(summary.base_total);
      summary.rows.push_back(std::move(row));
    } else {
      other += ordered[i].second;
    }
  }
  if (other > 0) {
    CountryRow row;
    row.country = "Other countries";
    row.author_count = other;
    row.author_percentage =
        100.0 * static_cast<double>(other) / static_cast<double>(summary.base_total);
    summary.rows.push_back(std::move(row));
  }
  return summary;
}

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

std::vector<std::string> eval_row_fields(const StepEvalRow& row, bool combined) {
  return {
      combined ? "" : std::to_string(row.step.step_id),
      combined ? "Combined" : std::string(criteria_label(row.step.criteria)),
      combined ? "Combined" : std::string(field_label(row.step.field)),
      std::to_string(row.counts.authors),
      std::to_string(row.counts.tweeters),
      std::to_string(row.counts.pairs),
      fmt_rate(row.eval.recall),
      fmt_rate(row.eval.precision),
      fmt_rate(row.eval.f_score),
  };
}

void render_aligned(std::ostream& out, const std::vector<std::vector<std::string>>& table,
                    size_t left_cols) {
  std::vector<size_t> widths;
  for (const auto& row : table) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
  }
  for (const auto& row : table) {
    std::string line;
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) line += "  ";
      if (i < left_cols) {
        line += row[i];
        line.append(widths[i] - row[i].size(), ' ');
      } else {
        line.append(widths[i] - row[i].size(), ' ');
        line += row[i];
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
}

}  // namespace

void write_eval_table_csv(const std::string& path, const std::vector<StepEvalRow>& rows,
                          const StepEvalRow* combined) {
  auto out = open_output(path);
  write_csv_row(out, {"step_id", "criteria", "field", "authors", "tweeters", "pairs", "recall",
                      "precision", "f_score"});
  for (const auto& row : rows) write_csv_row(out, eval_row_fields(row, false));
  if (combined) write_csv_row(out, eval_row_fields(*combined, true));
}

void write_eval_table_txt(const std::string& path, const std::string& title,
                          const std::vector<StepEvalRow>& rows, const StepEvalRow* combined) {
  auto out = open_output(path);
  out << title << '\n';
  std::vector<std::vector<std::string>> table;
  table.push_back({"criteria", "field", "authors", "tweeters", "pairs", "recall", "precision",
                   "f_score"});
  auto to_row = [](const StepEvalRow& row, bool is_combined) {
    auto fields = eval_row_fields(row, is_combined);
    fields.erase(fields.begin());  // drop step_id in the pretty view
    return fields;
  };
  for (const auto& row : rows) table.push_back(to_row(row, false));
  if (combined) table.push_back(to_row(*combined, true));
  render_aligned(out, table, 2);
}

void write_discipline_csv(const std::string& path, const DisciplineSummary& summary) {
  auto out = open_output(path);
  write_csv_row(out, {"discipline", "authors", "percentage", "average_score"});
  for (const auto& row : summary.rows) {
    write_csv_row(out, {row.discipline, std::to_string(row.author_count),
                        fmt_pct(row.author_percentage), fmt_rate(row.average_score)});
  }
}

void write_discipline_txt(const std::string& path, const DisciplineSummary& summary) {
  auto out = open_output(path);
  out << "Authors by discipline (level-0 concept with the highest summed score)\n";
  std::vector<std::vector<std::string>> table;
  table.push_back({"discipline", "authors", "percentage", "average_score"});
  for (const auto& row : summary.rows) {
    table.push_back({row.discipline, std::to_string(row.author_count),
                     fmt_pct(row.author_percentage), fmt_rate(row.average_score)});
  }
  table.push_back({"Total", std::to_string(summary.assigned_total), summary.rows.empty() ? "" : "100.0", ""});
  render_aligned(out, table, 1);
  out << "excluded (no level-0 concepts): " << summary.excluded_no_concepts << '\n';
}

void write_country_csv(const std::string& path, const CountrySummary& summary) {
  auto out = open_output(path);
  write_csv_row(out, {"country", "authors", "percentage"});
  for (const auto& row : summary.rows) {
    write_csv_row(out,
                  {row.country, std::to_string(row.author_count), fmt_pct(row.author_percentage)});
  }
}

void write_country_txt(const std::string& path, const CountrySummary& summary) {
  auto out = open_output(path);
  out << "Authors by country of last known affiliation\n";
  std::vector<std::vector<std::string>> table;
  table.push_back({"country", "authors", "percentage"});
  for (const auto& row : summary.rows) {
    table.push_back(
        {row.country, std::to_string(row.author_count), fmt_pct(row.author_percentage)});
  }
  table.push_back({"Total", std::to_string(summary.base_total), summary.rows.empty() ? "" : "100.0"});
  render_aligned(out, table, 1);
  out << "unknown country (excluded from base): " << summary.unknown << '\n';
}

}  // namespace scholarmatch
