#include "scholarmatch/matcher.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "scholarmatch/csv.hpp"
#include "scholarmatch/errors.hpp"
#include "scholarmatch/util.hpp"

namespace scholarmatch {

const std::array<MatchStep, 9>& match_steps() {
  static const std::array<MatchStep, 9> steps = {{
      {1, Criteria::kLastNameFirstToken, MatchField::kHandle},
      {2, Criteria::kFullNameExact, MatchField::kHandle},
      {3, Criteria::kLastNameInitials, MatchField::kHandle},
      {4, Criteria::kLastNameFirstInitial, MatchField::kHandle},
      {5, Criteria::kFullNameExact, MatchField::kProfileName},
      {6, Criteria::kLastNameFirstToken, MatchField::kProfileName},
      {7, Criteria::kFullNameSubstring, MatchField::kProfileName},
      {8, Criteria::kLastNameInitials, MatchField::kProfileName},
      {9, Criteria::kLastNameFirstInitial, MatchField::kProfileName},
  }};
  return steps;
}

std::string_view criteria_token(Criteria c) {
  switch (c) {
    case Criteria::kFullNameExact: return "full_name_exact";
    case Criteria::kFullNameSubstring: return "full_name_substring";
    case Criteria::kLastNameInitials: return "last_name_initials";
    case Criteria::kLastNameFirstToken: return "last_name_first_token";
    case Criteria::kLastNameFirstInitial: return "last_name_first_initial";
  }
  return "?";
}

std::string_view criteria_label(Criteria c) {
  switch (c) {
    case Criteria::kFullNameExact: return "Full name exact match";
    case Criteria::kFullNameSubstring: return "Full name substring";
    case Criteria::kLastNameInitials: return "Last name + initials";
    case Criteria::kLastNameFirstToken: return "Last name + first token";
    case Criteria::kLastNameFirstInitial: return "Last name + first initial";
  }
  return "?";
}

std::string_view field_token(MatchField f) {
  return f == MatchField::kHandle ? "handle" : "profile_name";
}

std::string_view field_label(MatchField f) {
  return f == MatchField::kHandle ? "Handle" : "Profile name";
}

uint16_t steps_mask_without(const std::vector<int>& disabled_steps) {
  uint16_t mask = kAllStepsMask;
  for (int s : disabled_steps) {
    if (s < 1 || s > 9) throw ConfigError("step id out of range: " + std::to_string(s));
    mask = static_cast<uint16_t>(mask & ~(1u << (s - 1)));
  }
  return mask;
}

std::vector<CandidatePair> generate_candidates(const DoiIndex& index) {
  // Intern ids with ranks in lexicographic order, so sorting by rank is
  // sorting by id.
  std::vector<std::string> author_ids, tweeter_ids;
  std::vector<const std::string*> shared_dois;
  for (const auto& [doi, authors] : index.authors_by_doi) {
    auto it = index.tweeters_by_doi.find(doi);
    if (it == index.tweeters_by_doi.end()) continue;
    shared_dois.push_back(&doi);
    author_ids.insert(author_ids.end(), authors.begin(), authors.end());
    tweeter_ids.insert(tweeter_ids.end(), it->second.begin(), it->second.end());
  }
  auto rank = [](std::vector<std::string>& ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  };
  rank(author_ids);
  rank(tweeter_ids);
  auto rank_of = [](const std::vector<std::string>& ids, const std::string& id) {
    return static_cast<uint32_t>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };
  std::sort(shared_dois.begin(), shared_dois.end(),
            [](const std::string* a, const std::string* b) { return *a < *b; });

  struct Triple {
    uint32_t author, tweeter, doi;
  };
  std::vector<Triple> triples;
  for (uint32_t d = 0; d < shared_dois.size(); ++d) {
    const auto& authors = index.authors_by_doi.at(*shared_dois[d]);
    const auto& tweeters = index.tweeters_by_doi.at(*shared_dois[d]);
    for (const auto& a : authors) {
      uint32_t ar = rank_of(author_ids, a);
      for (const auto& t : tweeters) {
        triples.push_back({ar, rank_of(tweeter_ids, t), d});
      }
    }
  }
  std::sort(triples.begin(), triples.end(), [](const Triple& x, const Triple& y) {
    if (x.author != y.author) return x.author < y.author;
    if (x.tweeter != y.tweeter) return x.tweeter < y.tweeter;
    return x.doi < y.doi;
  });

  std::vector<CandidatePair> out;
  for (size_t i = 0; i < triples.size();) {
    size_t j = i;
    CandidatePair pair;
    pair.author_id = author_ids[triples[i].author];
    pair.tweeter_id = tweeter_ids[triples[i].tweeter];
    while (j < triples.size() && triples[j].author == triples[i].author &&
           triples[j].tweeter == triples[i].tweeter) {
      if (pair.shared_dois.empty() || pair.shared_dois.back() != *shared_dois[triples[j].doi]) {
        pair.shared_dois.push_back(*shared_dois[triples[j].doi]);
      }
      ++j;
    }
    out.push_back(std::move(pair));
    i = j;
  }
  return out;
}

AuthorForms build_author_forms(const AuthorRecord& author, const HonorificSet& honorifics) {
  AuthorForms f;
  f.id = author.author_id;
  auto name = try_normalize_name(author.display_name, honorifics);
  if (!name) return f;
  f.tokens = name->tokens;
  f.full_joined = name->joined();
  f.full_concat = concat_full(*name);
  f.variants = expand_variants(author.author_id, *name);
  f.key_ft_concat.reserve(f.variants.size());
  for (const auto& v : f.variants) {
    std::string last_concat;
    for (char c : v.last_name) {
      if (c != ' ') last_concat += c;
    }
    f.key_ft_concat.push_back(v.first_token + last_concat);
    f.key_ini_concat.push_back(v.initials + last_concat);
    f.key_fi_concat.push_back(std::string(1, v.first_initial) + last_concat);
    f.key_last_ft.push_back(v.last_name + '\x1f' + v.first_token);
    f.key_last_ini.push_back(v.last_name + '\x1f' + v.initials);
    f.key_last_fi.push_back(v.last_name + '\x1f' + v.first_initial);
  }
  return f;
}

TweeterForms build_tweeter_forms(const TweeterProfile& tweeter, const HonorificSet& honorifics) {
  TweeterForms f;
  f.id = tweeter.tweeter_id;
  f.handle = normalize_handle(tweeter.handle);
  auto name = try_normalize_name(tweeter.profile_name, honorifics);
  if (name) {
    f.tokens = name->tokens;
    f.full_joined = name->joined();
    f.variants = expand_variants(tweeter.tweeter_id, *name);
    for (uint16_t v = 0; v < f.variants.size(); ++v) {
      const auto& var = f.variants[v];
      f.key_last_ft.emplace_back(var.last_name + '\x1f' + var.first_token, v);
      f.key_last_ini.emplace_back(var.last_name + '\x1f' + var.initials, v);
      f.key_last_fi.emplace_back(var.last_name + '\x1f' + var.first_initial, v);
    }
    std::sort(f.key_last_ft.begin(), f.key_last_ft.end());
    std::sort(f.key_last_ini.begin(), f.key_last_ini.end());
    std::sort(f.key_last_fi.begin(), f.key_last_fi.end());
    // Every contiguous whole-token run, for the substring criterion.
    for (size_t i = 0; i < f.tokens.size(); ++i) {
      std::string run;
      for (size_t j = i; j < f.tokens.size(); ++j) {
        if (j > i) run += ' ';
        run += f.tokens[j];
        f.token_runs.insert(run);
      }
    }
  }
  return f;
}

FormsTables build_forms(const Corpus& corpus, const HonorificSet& honorifics, int workers) {
  FormsTables tables;
  tables.authors.resize(corpus.authors.size());
  tables.tweeters.resize(corpus.tweeters.size());

#ifdef _OPENMP
  int threads = workers > 0 ? workers : omp_get_max_threads();
#else
  (void)workers;
#endif

#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
  for (size_t i = 0; i < corpus.authors.size(); ++i) {
    tables.authors[i] = build_author_forms(corpus.authors[i], honorifics);
  }

#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
  for (size_t i = 0; i < corpus.tweeters.size(); ++i) {
    tables.tweeters[i] = build_tweeter_forms(corpus.tweeters[i], honorifics);
  }

  tables.author_index.reserve(tables.authors.size());
  for (uint32_t i = 0; i < tables.authors.size(); ++i) {
    tables.author_index.emplace(tables.authors[i].id, i);
    if (!tables.authors[i].usable()) ++tables.stats.authors_empty_name;
    else if (tables.authors[i].variants.empty()) ++tables.stats.authors_single_token;
  }
  tables.tweeter_index.reserve(tables.tweeters.size());
  for (uint32_t i = 0; i < tables.tweeters.size(); ++i) {
    tables.tweeter_index.emplace(tables.tweeters[i].id, i);
    if (tables.tweeters[i].handle.empty()) ++tables.stats.tweeters_empty_handle;
    if (tables.tweeters[i].tokens.empty()) ++tables.stats.tweeters_empty_profile;
  }
  return tables;
}

std::vector<CandidateRef> to_candidate_refs(const std::vector<CandidatePair>& candidates,
                                            const FormsTables& forms) {
  std::vector<CandidateRef> refs;
  refs.reserve(candidates.size());
  for (const auto& c : candidates) {
    auto a = forms.author_index.find(c.author_id);
    auto t = forms.tweeter_index.find(c.tweeter_id);
    if (a == forms.author_index.end() || t == forms.tweeter_index.end()) continue;
    refs.push_back({a->second, t->second});
  }
  return refs;
}

namespace {

// Sorted by (key, variant), so the first hit is the lowest variant.
bool composite_lookup(const std::vector<std::pair<std::string, uint16_t>>& sorted_keys,
                      const std::string& key, uint16_t* tweeter_variant) {
  auto it = std::lower_bound(
      sorted_keys.begin(), sorted_keys.end(), key,
      [](const std::pair<std::string, uint16_t>& p, const std::string& k) { return p.first < k; });
  if (it == sorted_keys.end() || it->first != key) return false;
  *tweeter_variant = it->second;
  return true;
}

bool variant_step(const std::vector<std::string>& author_keys,
                  const std::vector<std::pair<std::string, uint16_t>>& tweeter_keys,
                  StepWitness* w) {
  for (size_t v = 0; v < author_keys.size(); ++v) {
    uint16_t tv = 0;
    if (composite_lookup(tweeter_keys, author_keys[v], &tv)) {
      w->author_variant = static_cast<int16_t>(v);
      w->tweeter_variant = static_cast<int16_t>(tv);
      return true;
    }
  }
  return false;
}

bool handle_step(const std::vector<std::string>& author_keys, const std::string& handle,
                 StepWitness* w) {
  if (handle.empty()) return false;
  for (size_t v = 0; v < author_keys.size(); ++v) {
    if (author_keys[v] == handle) {
      w->author_variant = static_cast<int16_t>(v);
      return true;
    }
  }
  return false;
}

bool eval_step(int step_id, const AuthorForms& a, const TweeterForms& t, StepWitness* w) {
  switch (step_id) {
    case 1:
      return handle_step(a.key_ft_concat, t.handle, w);
    case 2:
      return a.usable() && !t.handle.empty() && a.full_concat == t.handle;
    case 3:
      return handle_step(a.key_ini_concat, t.handle, w);
    case 4:
      return handle_step(a.key_fi_concat, t.handle, w);
    case 5:
      return a.usable() && !t.tokens.empty() && a.full_joined == t.full_joined;
    case 6:
      return variant_step(a.key_last_ft, t.key_last_ft, w);
    case 7:
      return a.usable() && !t.tokens.empty() && t.token_runs.count(a.full_joined) > 0;
    case 8:
      return variant_step(a.key_last_ini, t.key_last_ini, w);
    case 9:
      return variant_step(a.key_last_fi, t.key_last_fi, w);
    default:
      return false;
  }
}

struct CandEval {
  uint16_t mask = 0;
  StepWitness witness;  // witness at the first (lowest) enabled step hit
};

}  // namespace

MatchOutcome run_hierarchy(const FormsTables& forms, const std::vector<CandidateRef>& candidates,
                           const MatchOptions& options) {
  std::vector<CandEval> evals(candidates.size());

#ifdef _OPENMP
  int threads = options.workers > 0 ? options.workers : omp_get_max_threads();
#endif

  // Each candidate is evaluated independently against every enabled step;
  // results land in per-candidate slots, so scheduling cannot change them.
  const auto n = static_cast<int64_t>(candidates.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
  for (int64_t i = 0; i < n; ++i) {
    const auto& c = candidates[static_cast<size_t>(i)];
    const AuthorForms& a = forms.authors[c.author];
    const TweeterForms& t = forms.tweeters[c.tweeter];
    CandEval e;
    for (const auto& step : match_steps()) {
      uint16_t bit = static_cast<uint16_t>(1u << (step.step_id - 1));
      if (!(options.enabled_mask & bit)) continue;
      StepWitness w;
      if (eval_step(step.step_id, a, t, &w)) {
        if (e.mask == 0) e.witness = w;
        e.mask = static_cast<uint16_t>(e.mask | bit);
      }
    }
    evals[static_cast<size_t>(i)] = e;
  }

  MatchOutcome out;
  out.enabled_mask = options.enabled_mask;
  for (size_t i = 0; i < candidates.size(); ++i) {
    const auto& e = evals[i];
    if (e.mask == 0) continue;
    int first = std::countr_zero(e.mask) + 1;
    out.combined.push_back({candidates[i].author, candidates[i].tweeter,
                            static_cast<uint8_t>(first), e.witness});
    for (int s = 1; s <= 9; ++s) {
      if (e.mask & (1u << (s - 1))) out.independent[s - 1].push_back(candidates[i]);
    }
  }

  // Cumulative distinct counts after each step.
  std::vector<uint8_t> author_seen(forms.authors.size(), 0);
  std::vector<uint8_t> tweeter_seen(forms.tweeters.size(), 0);
  StepCounts running;
  for (int s = 1; s <= 9; ++s) {
    for (const auto& rec : out.combined) {
      if (rec.step != s) continue;
      if (!author_seen[rec.author]) {
        author_seen[rec.author] = 1;
        ++running.authors;
      }
      if (!tweeter_seen[rec.tweeter]) {
        tweeter_seen[rec.tweeter] = 1;
        ++running.tweeters;
      }
      ++running.pairs;
    }
    out.cumulative[s - 1] = running;
  }
  return out;
}

void validate_outcome(const MatchOutcome& outcome) {
  auto key = [](uint32_t a, uint32_t t) { return (static_cast<uint64_t>(a) << 32) | t; };

  std::array<std::unordered_set<uint64_t>, 9> independent_sets;
  for (int s = 1; s <= 9; ++s) {
    for (const auto& c : outcome.independent[s - 1]) {
      if (!independent_sets[s - 1].insert(key(c.author, c.tweeter)).second) {
        throw std::logic_error("duplicate pair in independent step set");
      }
    }
  }

  std::unordered_set<uint64_t> combined_keys;
  StepCounts expect_final;
  std::unordered_set<uint64_t> final_authors, final_tweeters;
  size_t prev_pairs = 0;
  std::array<size_t, 9> new_per_step{};
  for (const auto& rec : outcome.combined) {
    if (rec.step < 1 || rec.step > 9) throw std::logic_error("step id out of range");
    if (!(outcome.enabled_mask & (1u << (rec.step - 1)))) {
      throw std::logic_error("pair attributed to a disabled step");
    }
    if (!combined_keys.insert(key(rec.author, rec.tweeter)).second) {
      throw std::logic_error("pair appears twice in combined set");
    }
    // The assigned step must be the first enabled step whose independent
    // set contains the pair.
    for (int s = 1; s <= 9; ++s) {
      if (!(outcome.enabled_mask & (1u << (s - 1)))) continue;
      bool present = independent_sets[s - 1].count(key(rec.author, rec.tweeter)) > 0;
      if (s < rec.step && present) throw std::logic_error("pair matched an earlier enabled step");
      if (s == rec.step && !present) throw std::logic_error("assigned step does not match pair");
    }
    ++new_per_step[rec.step - 1];
    final_authors.insert(rec.author);
    final_tweeters.insert(rec.tweeter);
  }
  expect_final = {final_authors.size(), final_tweeters.size(), combined_keys.size()};

  // Every independently-matched pair must be in the combined set.
  for (int s = 1; s <= 9; ++s) {
    for (const auto& c : outcome.independent[s - 1]) {
      if (!combined_keys.count(key(c.author, c.tweeter))) {
        throw std::logic_error("independently matched pair missing from combined set");
      }
    }
  }

  size_t cum = 0;
  for (int s = 1; s <= 9; ++s) {
    cum += new_per_step[s - 1];
    const auto& row = outcome.cumulative[s - 1];
    if (row.pairs != cum) throw std::logic_error("cumulative pair count mismatch");
    if (s > 1) {
      const auto& prev = outcome.cumulative[s - 2];
      if (row.pairs < prev.pairs || row.authors < prev.authors || row.tweeters < prev.tweeters) {
        throw std::logic_error("cumulative counts decreased");
      }
    }
    prev_pairs = row.pairs;
  }
  (void)prev_pairs;
  const auto& last = outcome.cumulative[8];
  if (last.pairs != expect_final.pairs || last.authors != expect_final.authors ||
      last.tweeters != expect_final.tweeters) {
    throw std::logic_error("final cumulative row does not equal combined counts");
  }
}

std::string render_author_value(const MatchStep& step, const AuthorForms& forms, int16_t variant) {
  if (step.field == MatchField::kHandle) {
    switch (step.criteria) {
      case Criteria::kFullNameExact:
        return forms.full_concat;
      case Criteria::kLastNameFirstToken:
        return forms.key_ft_concat.at(static_cast<size_t>(variant));
      case Criteria::kLastNameInitials:
        return forms.key_ini_concat.at(static_cast<size_t>(variant));
      case Criteria::kLastNameFirstInitial:
        return forms.key_fi_concat.at(static_cast<size_t>(variant));
      default:
        break;
    }
    return forms.full_concat;
  }
  switch (step.criteria) {
    case Criteria::kFullNameExact:
    case Criteria::kFullNameSubstring:
      return forms.full_joined;
    case Criteria::kLastNameFirstToken: {
      const auto& v = forms.variants.at(static_cast<size_t>(variant));
      return v.first_token + ' ' + v.last_name;
    }
    case Criteria::kLastNameInitials: {
      const auto& v = forms.variants.at(static_cast<size_t>(variant));
      return v.initials + ' ' + v.last_name;
    }
    case Criteria::kLastNameFirstInitial: {
      const auto& v = forms.variants.at(static_cast<size_t>(variant));
      return std::string(1, v.first_initial) + ' ' + v.last_name;
    }
  }
  return forms.full_joined;
}

std::string render_tweeter_value(const MatchStep& step, const TweeterForms& forms) {
  return step.field == MatchField::kHandle ? forms.handle : forms.full_joined;
}

std::vector<IdPair> RenderedOutcome::combined_pairs() const {
  std::vector<IdPair> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.emplace_back(r.author_id, r.tweeter_id);
  return out;
}

std::vector<IdPair> RenderedOutcome::pairs_at_step(int step_id) const {
  std::vector<IdPair> out;
  for (const auto& r : rows) {
    if (r.step_id == step_id) out.emplace_back(r.author_id, r.tweeter_id);
  }
  return out;
}

std::vector<IdPair> RenderedOutcome::pairs_through_step(int step_id) const {
  std::vector<IdPair> out;
  for (const auto& r : rows) {
    if (r.step_id <= step_id) out.emplace_back(r.author_id, r.tweeter_id);
  }
  return out;
}

RenderedOutcome render_outcome(const MatchOutcome& outcome, const FormsTables& forms) {
  RenderedOutcome out;
  out.enabled_mask = outcome.enabled_mask;
  out.cumulative = outcome.cumulative;
  out.rows.reserve(outcome.combined.size());
  for (const auto& rec : outcome.combined) {
    const MatchStep& step = match_steps()[rec.step - 1];
    const AuthorForms& a = forms.authors[rec.author];
    const TweeterForms& t = forms.tweeters[rec.tweeter];
    out.rows.push_back({a.id, t.id, rec.step, render_author_value(step, a, rec.witness.author_variant),
                        render_tweeter_value(step, t)});
  }
  std::sort(out.rows.begin(), out.rows.end(), [](const MatchRow& x, const MatchRow& y) {
    if (x.step_id != y.step_id) return x.step_id < y.step_id;
    if (x.author_id != y.author_id) return x.author_id < y.author_id;
    return x.tweeter_id < y.tweeter_id;
  });
  for (int s = 1; s <= 9; ++s) {
    auto& dest = out.independent[s - 1];
    dest.reserve(outcome.independent[s - 1].size());
    for (const auto& c : outcome.independent[s - 1]) {
      dest.emplace_back(forms.authors[c.author].id, forms.tweeters[c.tweeter].id);
    }
    std::sort(dest.begin(), dest.end());
  }
  return out;
}

bool rendered_equal(const RenderedOutcome& a, const RenderedOutcome& b, std::string* diff) {
  std::ostringstream d;
  if (a.enabled_mask != b.enabled_mask) d << "enabled step masks differ\n";
  if (a.rows.size() != b.rows.size()) {
    d << "combined sizes differ: " << a.rows.size() << " vs " << b.rows.size() << "\n";
  } else {
    for (size_t i = 0; i < a.rows.size(); ++i) {
      const auto& x = a.rows[i];
      const auto& y = b.rows[i];
      if (x.author_id != y.author_id || x.tweeter_id != y.tweeter_id || x.step_id != y.step_id ||
          x.author_value != y.author_value || x.tweeter_value != y.tweeter_value) {
        d << "row " << i << " differs: (" << x.author_id << "," << x.tweeter_id << ",s" << x.step_id
          << "," << x.author_value << "," << x.tweeter_value << ") vs (" << y.author_id << ","
          << y.tweeter_id << ",s" << y.step_id << "," << y.author_value << "," << y.tweeter_value
          << ")\n";
        break;
      }
    }
  }
  for (int s = 1; s <= 9; ++s) {
    if (a.independent[s - 1] != b.independent[s - 1]) {
      d << "independent sets differ at step " << s << " (" << a.independent[s - 1].size() << " vs "
        << b.independent[s - 1].size() << ")\n";
    }
  }
  for (int s = 1; s <= 9; ++s) {
    const auto& x = a.cumulative[s - 1];
    const auto& y = b.cumulative[s - 1];
    if (x.pairs != y.pairs || x.authors != y.authors || x.tweeters != y.tweeters) {
      d << "cumulative counts differ at step " << s << "\n";
    }
  }
  std::string text = d.str();
  if (diff) *diff = text;
  return text.empty();
}

void write_matches_csv(const std::string& path, const RenderedOutcome& outcome) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_csv_row(out, {"author_id", "tweeter_id", "step_id", "criteria", "field",
                      "matched_author_variant", "matched_tweeter_value"});
  for (const auto& r : outcome.rows) {
    const MatchStep& step = match_steps()[static_cast<size_t>(r.step_id - 1)];
    write_csv_row(out, {r.author_id, r.tweeter_id, std::to_string(r.step_id),
                        std::string(criteria_token(step.criteria)),
                        std::string(field_token(step.field)), r.author_value, r.tweeter_value});
  }
}

}  // namespace scholarmatch
