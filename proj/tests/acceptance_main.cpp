// Acceptance suite: one pass/fail line per criterion, nonzero exit when
// any criterion fails. Budgeted to run on a small desktop.

#include <sys/resource.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "scholarmatch/errors.hpp"
#include "scholarmatch/evaluator.hpp"
#include "scholarmatch/namekit.hpp"
#include "scholarmatch/pipeline.hpp"
#include "scholarmatch/reference.hpp"
#include "scholarmatch/reporter.hpp"
#include "scholarmatch/synth.hpp"
#include "scholarmatch/util.hpp"

using namespace scholarmatch;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  std::string name;
  std::function<bool(std::string*)> run;
};

fs::path temp_root() {
  static fs::path root = fs::temp_directory_path() /
                         ("scholarmatch_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(root);
  return root;
}

PipelineConfig fixture_config(const std::string& tag) {
  PipelineConfig config;
  config.inputs.authors = std::string(FIXTURE_DIR) + "/authors.csv";
  config.inputs.works = std::string(FIXTURE_DIR) + "/works.jsonl";
  config.inputs.events = std::string(FIXTURE_DIR) + "/events.csv";
  config.inputs.tweeters = std::string(FIXTURE_DIR) + "/tweeters.csv";
  config.inputs.golden = std::string(FIXTURE_DIR) + "/golden.csv";
  config.out_dir = (temp_root() / tag).string();
  config.quiet = true;
  return config;
}

// criterion 1 -------------------------------------------------------------

bool metric_formula_reproduction(std::string* detail) {
  struct Case {
    double p, r, expected;
  };
  const Case cases[] = {{0.958, 0.623, 0.755}, {0.971, 0.423, 0.590}};
  bool ok = true;
  std::ostringstream msg;
  for (const auto& c : cases) {
    double f = f_score(c.p, c.r);
    bool within = std::fabs(f - c.expected) <= 0.0005;
    msg << "F(" << c.p << "," << c.r << ")=" << f << " vs " << c.expected << "±0.0005"
        << (within ? " ok" : " OUT OF TOLERANCE") << "; ";
    ok = ok && within;
  }
  *detail = msg.str();
  return ok;
}

// criteria 2, 4, 5 --------------------------------------------------------

bool check_accounting(const RenderedOutcome& outcome, std::string* detail) {
  size_t partition_sum = 0;
  for (int s = 1; s <= 9; ++s) {
    auto pairs = outcome.pairs_at_step(s);
    partition_sum += pairs.size();
    for (const auto& p : pairs) {
      for (int s2 = 1; s2 < s; ++s2) {
        auto earlier = outcome.pairs_at_step(s2);
        for (const auto& q : earlier) {
          if (p == q) {
            *detail = "pair assigned to two steps";
            return false;
          }
        }
      }
    }
  }
  if (partition_sum != outcome.rows.size()) {
    *detail = "new-pairs sets do not partition the combined set";
    return false;
  }
  for (int s = 2; s <= 9; ++s) {
    if (outcome.cumulative[s - 1].pairs < outcome.cumulative[s - 2].pairs) {
      *detail = "cumulative pair counts decreased";
      return false;
    }
  }
  if (outcome.cumulative[8].pairs != outcome.rows.size()) {
    *detail = "final cumulative row differs from the combined row";
    return false;
  }
  auto combined = count_distinct(outcome.combined_pairs());
  if (outcome.cumulative[8].authors != combined.authors ||
      outcome.cumulative[8].tweeters != combined.tweeters) {
    *detail = "final cumulative distinct counts differ from the combined row";
    return false;
  }
  return true;
}

struct OracleSweepResult {
  bool equal = true;
  bool accounting = true;
  bool under_budget = true;
  double worst_ms = 0;
  int corpora = 0;
  std::string detail;
};

OracleSweepResult& oracle_sweep() {
  static OracleSweepResult result = [] {
    OracleSweepResult r;
    Rng rng(20250810);
    for (int i = 0; i < 100; ++i) {
      SynthParams params;
      params.seed = 1000 + static_cast<uint64_t>(i);
      params.authors = 20 + rng.bounded(481);   // up to 500
      params.tweeters = 20 + rng.bounded(481);  // up to 500
      params.events = params.tweeters * 2 + rng.bounded(200);
      params.homonym_rate = rng.real() * 0.2;
      params.planted_fraction = 0.3 + rng.real() * 0.4;
      if (static_cast<size_t>(params.planted_fraction * params.tweeters + 0.5) > params.authors) {
        params.planted_fraction = 0.2;
      }
      StopWatch watch;
      auto synth = generate_synthetic_corpus(params);
      auto fast = match_corpus(synth.corpus, default_honorifics(), 0, kAllStepsMask);
      auto slow = brute_force_match(synth.corpus);
      double ms = watch.elapsed_ms();
      r.worst_ms = std::max(r.worst_ms, ms);
      if (ms > 5000) r.under_budget = false;

      std::string diff;
      if (!rendered_equal(fast.outcome, slow, &diff)) {
        r.equal = false;
        r.detail = "seed " + std::to_string(params.seed) + ": " + diff;
        break;
      }
      std::string acc;
      if (!check_accounting(fast.outcome, &acc) || !check_accounting(slow, &acc)) {
        r.accounting = false;
        r.detail = "seed " + std::to_string(params.seed) + ": " + acc;
        break;
      }
      ++r.corpora;
    }
    return r;
  }();
  return result;
}

bool oracle_equivalence(std::string* detail) {
  auto& r = oracle_sweep();
  std::ostringstream msg;
  msg << r.corpora << " corpora compared, worst " << fmt_rate(r.worst_ms / 1000.0) << " s";
  if (!r.detail.empty()) msg << "; " << r.detail;
  *detail = msg.str();
  return r.equal && r.under_budget && r.corpora == 100;
}

bool accounting_invariants(std::string* detail) {
  auto& r = oracle_sweep();
  // Also exercised on the fixture run; the parallel engine additionally
  // self-checks in validate_outcome on every run.
  auto config = fixture_config("accounting");
  auto result = run_all(config);
  std::string acc;
  bool fixture_ok = check_accounting(result.outcome, &acc);
  *detail = "checked on 100 oracle corpora and the sample corpus" +
            (r.detail.empty() ? acc.empty() ? std::string() : "; " + acc
                              : "; " + r.detail);
  return r.accounting && fixture_ok;
}

// criterion 3 -------------------------------------------------------------

bool planted_recall_and_precision(std::string* detail) {
  std::ostringstream msg;
  bool ok = true;

  // All nine classes, no distractors: recall exactly 1.
  {
    SynthParams params;
    params.seed = 77;
    params.authors = 120;
    params.tweeters = 108;  // 12 plants per class
    params.events = 200;
    params.planted_fraction = 1.0;
    auto synth = generate_synthetic_corpus(params);
    std::array<bool, 9> class_seen{};
    for (const auto& p : synth.truth) class_seen[static_cast<size_t>(p.intended_step - 1)] = true;
    for (int s = 0; s < 9; ++s) ok = ok && class_seen[static_cast<size_t>(s)];
    auto matched = match_corpus(synth.corpus, default_honorifics(), 0, kAllStepsMask);
    auto report = evaluate(matched.outcome.combined_pairs(), synth.corpus.golden);
    msg << "no-distractor recall=" << report.recall;
    ok = ok && report.recall == 1.0;
  }

  // Unique-random-name distractors only: precision exactly 1.
  {
    SynthParams params;
    params.seed = 78;
    params.authors = 120;
    params.tweeters = 120;
    params.events = 400;
    params.planted_fraction = 0.5;
    params.homonym_rate = 0.0;
    auto synth = generate_synthetic_corpus(params);
    auto matched = match_corpus(synth.corpus, default_honorifics(), 0, kAllStepsMask);
    auto report = evaluate(matched.outcome.combined_pairs(), synth.corpus.golden);
    msg << ", distractor precision=" << report.precision << " (unrestricted "
        << report.precision_unrestricted << ")";
    ok = ok && report.precision == 1.0 && report.precision_unrestricted == 1.0 &&
         report.recall == 1.0;
  }
  *detail = msg.str();
  return ok;
}

// criterion 4 -------------------------------------------------------------

bool subsumption_reproduction(std::string* detail) {
  size_t checked = 0;
  for (uint64_t seed = 300; seed < 320; ++seed) {
    SynthParams params;
    params.seed = seed;
    params.authors = 100;
    params.tweeters = 100;
    params.events = 250;
    params.homonym_rate = 0.15;
    params.plant_classes = {1, 3, 4, 5, 6, 7, 8, 9};  // every name multi-token
    auto synth = generate_synthetic_corpus(params);
    auto matched = match_corpus(synth.corpus, default_honorifics(), 0, kAllStepsMask);
    if (!matched.outcome.pairs_at_step(2).empty()) {
      *detail = "seed " + std::to_string(seed) + " produced new pairs at the exact-handle step";
      return false;
    }
    ++checked;
  }
  *detail = std::to_string(checked) + " multi-token corpora, exact-handle row always 0";
  return true;
}

// criterion 6 -------------------------------------------------------------

bool determinism_across_workers(std::string* detail) {
  std::string baseline_matches, baseline_tables;
  for (int workers : {1, 2, 8}) {
    auto config = fixture_config("det_w" + std::to_string(workers));
    config.workers = workers;
    run_all(config);
    std::string matches = read_file((fs::path(config.out_dir) / kMatchesCsv).string());
    std::string tables;
    for (const char* name :
         {kPerCriterionCsv, kNewPairsCsv, kCumulativeCsv, kDisciplinesCsv, kCountriesCsv}) {
      tables += read_file((fs::path(config.out_dir) / name).string());
    }
    if (baseline_matches.empty()) {
      baseline_matches = matches;
      baseline_tables = tables;
    } else if (matches != baseline_matches || tables != baseline_tables) {
      *detail = "worker count " + std::to_string(workers) + " changed the artifacts";
      return false;
    }
  }
  *detail = "matches.csv and all tables byte-identical for workers 1, 2, 8";
  return true;
}

// criterion 7 -------------------------------------------------------------

bool variant_laws(std::string* detail) {
  StopWatch watch;
  Rng rng(424242);
  const int kRounds = 10000;
  for (int round = 0; round < kRounds; ++round) {
    size_t n_tokens = 1 + rng.bounded(6);
    std::vector<std::string> tokens;
    std::string raw;
    for (size_t i = 0; i < n_tokens; ++i) {
      size_t len = 1 + rng.bounded(7);
      std::string token;
      for (size_t k = 0; k < len; ++k) token += static_cast<char>('a' + rng.bounded(26));
      while (default_honorifics().count(token)) token += static_cast<char>('a' + rng.bounded(26));
      tokens.push_back(token);
      if (i) raw += ' ';
      raw += token;
    }
    auto name = try_normalize_name(raw);
    if (!name || name->tokens != tokens) {
      *detail = "normalization altered a clean name: " + raw;
      return false;
    }
    auto again = try_normalize_name(name->joined());
    if (!again || again->tokens != name->tokens) {
      *detail = "normalize_name is not idempotent on: " + raw;
      return false;
    }
    auto variants = expand_variants("X", *name);
    size_t n = name->tokens.size();
    if (variants.size() != (n >= 2 ? n - 1 : 0)) {
      *detail = "variant count law violated for: " + raw;
      return false;
    }
    for (const auto& v : variants) {
      auto first_tokens = split(v.first_name, ' ');
      if (v.initials.size() != first_tokens.size()) {
        *detail = "initials length mismatch for: " + raw;
        return false;
      }
      for (size_t i = 0; i < first_tokens.size(); ++i) {
        if (v.initials[i] != first_tokens[i][0]) {
          *detail = "initials content mismatch for: " + raw;
          return false;
        }
      }
      if (v.first_initial != v.initials[0] || v.first_token != first_tokens[0]) {
        *detail = "derived field mismatch for: " + raw;
        return false;
      }
      if (v.first_name + ' ' + v.last_name != name->joined()) {
        *detail = "reconstruction failed for: " + raw;
        return false;
      }
    }
  }
  double sec = watch.elapsed_ms() / 1000.0;
  *detail = std::to_string(kRounds) + " names in " + fmt_rate(sec) + " s";
  return sec < 5.0;
}

// criterion 8 -------------------------------------------------------------

bool summaries_hand_check(std::string* detail) {
  // Twenty matched authors with hand-computable sums.
  std::vector<AuthorRecord> authors;
  std::vector<WorkRecord> works;
  std::vector<std::string> matched;
  auto add_author = [&](int i, const std::string& country) {
    AuthorRecord a;
    a.author_id = "A" + std::to_string(i);
    a.display_name = "Author " + std::to_string(i);
    a.country = country;
    authors.push_back(a);
    matched.push_back(a.author_id);
  };
  int next = 1;
  auto add_work = [&](const std::string& author,
                      std::initializer_list<std::pair<const char*, double>> concepts) {
    WorkRecord w;
    w.work_id = "W" + std::to_string(works.size() + 1);
    w.doi = "10.1/" + w.work_id;
    w.author_ids.push_back(author);
    for (auto& [name, score] : concepts) w.concepts.push_back({name, 0, score});
    works.push_back(w);
  };

  // 9 medicine authors: one work each, medicine 0.8 vs biology 0.2.
  for (int i = 0; i < 9; ++i) {
    add_author(next, i < 8 ? "US" : "");
    add_work("A" + std::to_string(next), {{"medicine", 0.8}, {"biology", 0.2}});
    ++next;
  }
  // 6 biology authors: two works, biology 0.3 and 0.5 (sum 0.8 over 2).
  for (int i = 0; i < 6; ++i) {
    add_author(next, i < 4 ? "GB" : "");
    add_work("A" + std::to_string(next), {{"biology", 0.3}});
    add_work("A" + std::to_string(next), {{"biology", 0.5}});
    ++next;
  }
  // 3 physics authors: physics 0.5 beats art 0.25.
  for (int i = 0; i < 3; ++i) {
    add_author(next, "CA");
    add_work("A" + std::to_string(next), {{"physics", 0.5}, {"art", 0.25}});
    ++next;
  }
  // 2 art authors: art 0.9.
  for (int i = 0; i < 2; ++i) {
    add_author(next, "DE");
    add_work("A" + std::to_string(next), {{"art", 0.9}});
    ++next;
  }

  auto disciplines = discipline_summary(matched, works);
  auto countries = country_summary(matched, authors, 2);

  std::ostringstream msg;
  bool ok = true;
  auto expect_row = [&](size_t idx, const std::string& name, size_t count, const char* pct,
                        const char* avg) {
    if (idx >= disciplines.rows.size()) {
      ok = false;
      return;
    }
    const auto& row = disciplines.rows[idx];
    bool row_ok = row.discipline == name && row.author_count == count &&
                  fmt_pct(row.author_percentage) == pct && fmt_rate(row.average_score) == avg;
    if (!row_ok) {
      ok = false;
      msg << "discipline row " << idx << " got " << row.discipline << "/" << row.author_count
          << "/" << fmt_pct(row.author_percentage) << "/" << fmt_rate(row.average_score)
          << " want " << name << "/" << count << "/" << pct << "/" << avg << "; ";
    }
  };
  expect_row(0, "medicine", 9, "45.0", "0.800");
  expect_row(1, "biology", 6, "30.0", "0.400");
  expect_row(2, "physics", 3, "15.0", "0.500");
  expect_row(3, "art", 2, "10.0", "0.900");
  ok = ok && disciplines.assigned_total == 20 && disciplines.excluded_no_concepts == 0;

  double pct_sum = 0;
  for (const auto& row : disciplines.rows) pct_sum += row.author_percentage;
  ok = ok && std::fabs(pct_sum - 100.0) <= 0.1;

  // Countries: US 8, GB 4, CA 3, DE 2 over a base of 17 (3 unknown),
  // collapsed to the top 2 plus Other.
  bool c_ok = countries.base_total == 17 && countries.unknown == 3 &&
              countries.rows.size() == 3 && countries.rows[0].country == "US" &&
              countries.rows[0].author_count == 8 &&
              fmt_pct(countries.rows[0].author_percentage) == "47.1" &&
              countries.rows[1].country == "GB" &&
              fmt_pct(countries.rows[1].author_percentage) == "23.5" &&
              countries.rows[2].country == "Other countries" &&
              countries.rows[2].author_count == 5 &&
              fmt_pct(countries.rows[2].author_percentage) == "29.4";
  if (!c_ok) {
    msg << "country rows: ";
    for (const auto& row : countries.rows) {
      msg << row.country << "/" << row.author_count << "/" << fmt_pct(row.author_percentage)
          << " ";
    }
  }
  double c_sum = 0;
  for (const auto& row : countries.rows) c_sum += row.author_percentage;
  c_ok = c_ok && std::fabs(c_sum - 100.0) <= 0.1;

  *detail = msg.str().empty() ? "discipline and country tables equal the hand computation"
                              : msg.str();
  return ok && c_ok;
}

// criterion 9 -------------------------------------------------------------

bool throughput_target(std::string* detail) {
  auto dir = temp_root() / "throughput";
  fs::create_directories(dir);

  SynthParams params;
  params.seed = 5150;
  params.authors = 100000;
  params.tweeters = 100000;
  params.events = 1000000;
  params.planted_fraction = 0.5;
  params.homonym_rate = 0.05;

  StopWatch gen_watch;
  auto synth = generate_synthetic_corpus(params);
  CorpusPaths paths;
  paths.authors = (dir / "authors.csv").string();
  paths.works = (dir / "works.jsonl").string();
  paths.events = (dir / "events.csv").string();
  paths.tweeters = (dir / "tweeters.csv").string();
  paths.golden = (dir / "golden.csv").string();
  write_corpus_files(synth.corpus, paths);
  double gen_s = gen_watch.elapsed_ms() / 1000.0;
  synth = SyntheticCorpus{};  // release before measuring the match run

  PipelineConfig config;
  config.inputs = paths;
  config.out_dir = (dir / "out").string();
  config.quiet = true;
  config.workers = 4;

  StopWatch match_watch;
  auto result = run_match(config);
  double match_s = match_watch.elapsed_ms() / 1000.0;

  struct rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  double peak_gb = static_cast<double>(usage.ru_maxrss) / (1024.0 * 1024.0);

  std::ostringstream msg;
  msg << "generate " << fmt_rate(gen_s) << " s, match " << fmt_rate(match_s) << " s for "
      << result.candidate_count << " candidates / " << result.outcome.rows.size()
      << " pairs, peak rss " << fmt_rate(peak_gb) << " GiB";
  *detail = msg.str();
  fs::remove_all(dir);
  return match_s < 120.0 && peak_gb < 8.0;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"metric formula reproduction", metric_formula_reproduction},
      {"oracle equivalence over 100 seeded corpora", oracle_equivalence},
      {"planted recall and distractor precision", planted_recall_and_precision},
      {"exact-handle subsumption", subsumption_reproduction},
      {"accounting invariants", accounting_invariants},
      {"determinism across worker counts", determinism_across_workers},
      {"variant laws over 10,000 names", variant_laws},
      {"summaries against hand computations", summaries_hand_check},
      {"throughput and memory target", throughput_target},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    std::string detail;
    bool pass = false;
    try {
      pass = criteria[i].run(&detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %zu: %s%s%s\n", pass ? "PASS" : "FAIL", i + 1,
                criteria[i].name.c_str(), detail.empty() ? "" : " — ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  fs::remove_all(temp_root());
  if (failures) std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  else std::printf("all %zu criteria passed\n", criteria.size());
  return failures == 0 ? 0 : 1;
}
