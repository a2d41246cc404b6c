#include "scholarmatch/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <unordered_set>

#include "scholarmatch/csv.hpp"
#include "scholarmatch/errors.hpp"
#include "scholarmatch/matcher.hpp"
#include "scholarmatch/namekit.hpp"
#include "scholarmatch/reference.hpp"
#include "scholarmatch/util.hpp"

namespace scholarmatch {

namespace {

std::string format_id(char prefix, size_t n) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%c%06zu", prefix, n);
  return buf;
}

std::string random_token(Rng& rng, size_t min_len = 3, size_t max_len = 8) {
  while (true) {
    size_t len = rng.range(min_len, max_len);
    std::string out(len, 'a');
    for (auto& c : out) c = static_cast<char>('a' + rng.bounded(26));
    // An honorific-shaped token would vanish in normalization and change
    // the token count the plant constructions rely on.
    if (!default_honorifics().count(out)) return out;
  }
}

std::vector<std::string> random_tokens(Rng& rng, size_t count) {
  std::vector<std::string> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) out.push_back(random_token(rng));
  return out;
}

std::string join_tokens(const std::vector<std::string>& tokens, char sep = ' ') {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i];
  }
  return out;
}

std::string concat_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) out += t;
  return out;
}

// Title-case display rendering with occasional honorifics and diacritics;
// everything added here normalizes back to the underlying tokens.
std::string render_display(Rng& rng, const std::vector<std::string>& tokens) {
  static const std::pair<char, const char*> kAccents[] = {
      {'a', "á"}, {'e', "é"}, {'i', "í"},
      {'o', "ó"}, {'u', "ú"}, {'n', "ñ"}, {'c', "ç"}};
  std::string out;
  if (rng.chance(0.12)) out += "Dr. ";
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    std::string t = tokens[i];
    t[0] = static_cast<char>(t[0] - 'a' + 'A');
    if (rng.chance(0.10)) {
      for (auto& [plain, accented] : kAccents) {
        auto pos = t.find(plain, 1);
        if (pos != std::string::npos) {
          t = t.substr(0, pos) + accented + t.substr(pos + 1);
          break;
        }
      }
    }
    out += t;
  }
  if (rng.chance(0.08)) out += ", PhD";
  return out;
}

// Token counts each plant class needs for a clean first hit at its step.
size_t class_token_count(Rng& rng, int step_class) {
  switch (step_class) {
    case 2:
      return 1;
    case 3:
    case 4:
    case 8:
    case 9:
      return 3;
    case 7:
      return 2;
    default:
      return 2 + (rng.chance(0.4) ? 1 : 0);
  }
}

struct PlantForms {
  std::string handle;
  std::string profile;
};

// All match keys a tweeter-side name or handle can present, used to keep
// distractors disjoint from every author.
struct AuthorKeySets {
  std::unordered_set<std::string> handle_keys;
  std::unordered_set<std::string> full_names;
  std::unordered_set<std::string> last_ft, last_ini, last_fi;
};

void add_author_keys(AuthorKeySets& sets, const std::vector<std::string>& tokens) {
  NormalizedName name{tokens};
  sets.full_names.insert(join_tokens(tokens));
  sets.handle_keys.insert(concat_tokens(tokens));
  for (const auto& v : expand_variants("", name)) {
    std::string last_concat;
    for (char c : v.last_name) {
      if (c != ' ') last_concat += c;
    }
    sets.handle_keys.insert(v.first_token + last_concat);
    sets.handle_keys.insert(v.initials + last_concat);
    sets.handle_keys.insert(std::string(1, v.first_initial) + last_concat);
    sets.last_ft.insert(v.last_name + '\x1f' + v.first_token);
    sets.last_ini.insert(v.last_name + '\x1f' + v.initials);
    sets.last_fi.insert(v.last_name + '\x1f' + v.first_initial);
  }
}

bool profile_collides(const AuthorKeySets& sets, const std::vector<std::string>& tokens) {
  // Any contiguous run equal to an author full name would trigger the
  // exact or substring criteria.
  for (size_t i = 0; i < tokens.size(); ++i) {
    std::string run;
    for (size_t j = i; j < tokens.size(); ++j) {
      if (j > i) run += ' ';
      run += tokens[j];
      if (sets.full_names.count(run)) return true;
    }
  }
  NormalizedName name{tokens};
  for (const auto& v : expand_variants("", name)) {
    if (sets.last_ft.count(v.last_name + '\x1f' + v.first_token)) return true;
    if (sets.last_ini.count(v.last_name + '\x1f' + v.initials)) return true;
    if (sets.last_fi.count(v.last_name + '\x1f' + v.first_initial)) return true;
  }
  return false;
}

}  // namespace

SyntheticCorpus generate_synthetic_corpus(const SynthParams& params) {
  if (params.authors == 0) throw InvalidParams("authors must be positive");
  if (params.planted_fraction < 0.0 || params.planted_fraction > 1.0) {
    throw InvalidParams("planted_fraction must be in [0,1]");
  }
  if (params.homonym_rate < 0.0 || params.homonym_rate > 1.0) {
    throw InvalidParams("homonym_rate must be in [0,1]");
  }
  if (params.plant_classes.empty()) throw InvalidParams("plant_classes must not be empty");
  for (int c : params.plant_classes) {
    if (c < 1 || c > 9) throw InvalidParams("plant class out of range: " + std::to_string(c));
  }
  size_t planted = static_cast<size_t>(params.planted_fraction * static_cast<double>(params.tweeters) + 0.5);
  planted = std::min(planted, params.tweeters);
  if (planted > params.authors) {
    throw InvalidParams("planted tweeters exceed author count");
  }

  Rng rng(params.seed);
  SyntheticCorpus result;
  Corpus& corpus = result.corpus;

  // Author names. Planted authors get the token shape their class needs.
  std::vector<std::vector<std::string>> author_tokens(params.authors);
  std::vector<int> plant_class(planted);
  for (size_t i = 0; i < planted; ++i) {
    plant_class[i] = params.plant_classes[i % params.plant_classes.size()];
    author_tokens[i] = random_tokens(rng, class_token_count(rng, plant_class[i]));
  }
  for (size_t i = planted; i < params.authors; ++i) {
    author_tokens[i] = random_tokens(rng, 2 + (rng.chance(0.4) ? 1 : 0));
  }

  // Planted tweeter forms, verified to first-match at the intended step.
  std::vector<PlantForms> plant_forms(planted);
  for (size_t i = 0; i < planted; ++i) {
    const auto& toks = author_tokens[i];
    int cls = plant_class[i];
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 50) {
        // Pathological collision inside the name itself; redraw it.
        author_tokens[i] = random_tokens(rng, class_token_count(rng, cls));
        attempt = 0;
      }
      PlantForms f;
      std::string junk_handle = random_token(rng, 8, 14);
      std::vector<std::string> junk_profile = {random_token(rng, 6, 10), random_token(rng, 6, 10)};
      const auto& t = author_tokens[i];
      switch (cls) {
        case 1:
          f.handle = concat_tokens(t);
          f.profile = join_tokens(junk_profile);
          break;
        case 2:
          f.handle = t[0];
          f.profile = join_tokens(junk_profile);
          break;
        case 3:
          f.handle = std::string(1, t[0][0]) + t[1][0] + t[2];
          f.profile = join_tokens(junk_profile);
          break;
        case 4:
          f.handle = std::string(1, t[0][0]) + t[2];
          f.profile = join_tokens(junk_profile);
          break;
        case 5:
          f.handle = junk_handle;
          f.profile = join_tokens(t);
          break;
        case 6:
          f.handle = junk_handle;
          f.profile = t[0] + ' ' + t[2];
          break;
        case 7:
          f.handle = junk_handle;
          f.profile = join_tokens(t) + ' ' + join_tokens(junk_profile);
          break;
        case 8:
          f.handle = junk_handle;
          f.profile = std::string(1, t[0][0]) + ' ' + std::string(1, t[1][0]) + ' ' + t[2];
          break;
        case 9:
          f.handle = junk_handle;
          f.profile = std::string(1, t[0][0]) + ' ' + t[2];
          break;
        default:
          throw InvalidParams("bad plant class");
      }

      ReferenceEntity author;
      author.id = "a";
      author.tokens = author_tokens[i];
      author.variants = expand_variants("a", NormalizedName{author_tokens[i]});
      ReferenceEntity tweeter;
      tweeter.id = "t";
      tweeter.handle = normalize_handle(f.handle);
      if (auto name = try_normalize_name(f.profile)) {
        tweeter.tokens = name->tokens;
        tweeter.variants = expand_variants("t", *name);
      }
      int first = 0;
      for (const auto& step : match_steps()) {
        if (pairwise_step(step, author, tweeter)) {
          first = step.step_id;
          break;
        }
      }
      if (first == cls) {
        plant_forms[i] = std::move(f);
        break;
      }
    }
  }

  // Key sets over the final author names, for distractor disjointness.
  AuthorKeySets keysets;
  for (const auto& toks : author_tokens) add_author_keys(keysets, toks);

  // Author records.
  static const char* kCountries[] = {"US", "GB", "CA", "AU", "DE", "FR", "ES", "NL", "IT",
                                     "BR", "IN", "CN", "JP", "SE", "CH", "BE", "DK", "FI",
                                     "IE", "NO", "PT", "PL", "AT", "NZ", "ZA"};
  corpus.authors.reserve(params.authors);
  for (size_t i = 0; i < params.authors; ++i) {
    AuthorRecord a;
    a.author_id = format_id('A', i + 1);
    a.display_name = render_display(rng, author_tokens[i]);
    if (rng.chance(0.15)) {
      a.orcid = "0000-000" + std::to_string(rng.bounded(10)) + "-" + std::to_string(1000 + rng.bounded(9000)) +
                "-" + std::to_string(1000 + rng.bounded(9000));
    }
    if (!rng.chance(0.10)) a.country = kCountries[rng.bounded(std::size(kCountries))];
    corpus.authors.push_back(std::move(a));
  }

  // Works: planted authors publish alone so planted pairs stay pure.
  static const char* kConcepts[] = {"medicine",  "biology",   "psychology", "computer science",
                                    "chemistry", "physics",   "sociology",  "economics",
                                    "geology",   "mathematics"};
  std::vector<std::vector<size_t>> works_of_author(params.authors);
  size_t work_counter = 0;
  for (size_t i = 0; i < params.authors; ++i) {
    size_t count = 1 + (rng.chance(0.3) ? 1 : 0);
    for (size_t k = 0; k < count; ++k) {
      WorkRecord w;
      w.work_id = format_id('W', ++work_counter);
      w.doi = "10.9999/" + lower_ascii(w.work_id);
      w.author_ids.push_back(corpus.authors[i].author_id);
      if (i >= planted && rng.chance(0.15)) {
        size_t co = rng.bounded(params.authors);
        if (co != i && co >= planted) w.author_ids.push_back(corpus.authors[co].author_id);
      }
      size_t n_concepts = 1 + rng.bounded(2);
      for (size_t c = 0; c < n_concepts; ++c) {
        ConceptScore cs;
        cs.concept_name = kConcepts[rng.bounded(std::size(kConcepts))];
        cs.level = rng.chance(0.8) ? 0 : 1;
        cs.score = static_cast<double>(rng.range(1, 100)) / 100.0;
        w.concepts.push_back(std::move(cs));
      }
      works_of_author[i].push_back(corpus.works.size());
      corpus.works.push_back(std::move(w));
    }
  }

  // Tweeters: planted first, then distractors.
  corpus.tweeters.reserve(params.tweeters);
  for (size_t i = 0; i < planted; ++i) {
    TweeterProfile t;
    t.tweeter_id = format_id('T', i + 1);
    t.handle = "@" + plant_forms[i].handle;
    t.profile_name = plant_forms[i].profile;
    corpus.tweeters.push_back(std::move(t));
    result.truth.push_back({corpus.authors[i].author_id, corpus.tweeters.back().tweeter_id,
                            plant_class[i]});
  }
  for (size_t i = planted; i < params.tweeters; ++i) {
    TweeterProfile t;
    t.tweeter_id = format_id('T', i + 1);
    bool homonym = rng.chance(params.homonym_rate);
    if (homonym) {
      const auto& victim = author_tokens[rng.bounded(params.authors)];
      std::string first = random_token(rng);
      // Half the time, the homonym also shares the first initial.
      if (rng.chance(0.5)) first[0] = victim[0][0];
      t.profile_name = render_display(rng, {first, victim.back()});
      t.handle = "@" + random_token(rng, 8, 14);
    } else {
      for (int attempt = 0;; ++attempt) {
        if (attempt >= 200) throw StageError("synth", "could not draw a disjoint distractor name");
        auto toks = random_tokens(rng, 2 + (rng.chance(0.3) ? 1 : 0));
        std::string handle = random_token(rng, 8, 14);
        std::string display = render_display(rng, toks);
        // Check collisions on the tokens the pipeline will actually see.
        auto norm = try_normalize_name(display);
        if (!norm || profile_collides(keysets, norm->tokens) ||
            keysets.handle_keys.count(handle)) {
          continue;
        }
        t.profile_name = display;
        t.handle = "@" + handle;
        break;
      }
    }
    corpus.tweeters.push_back(std::move(t));
  }

  // Events: planted self-tweets first, then random tweets over the corpus.
  size_t event_counter = 0;
  auto add_event = [&](const std::string& tweeter_id, const std::string& doi) {
    corpus.events.push_back(TweetEvent{format_id('E', ++event_counter), tweeter_id, doi});
  };
  for (size_t i = 0; i < planted; ++i) {
    const auto& works = works_of_author[i];
    add_event(corpus.tweeters[i].tweeter_id, corpus.works[works[0]].doi);
    if (works.size() > 1 && rng.chance(0.3)) {
      add_event(corpus.tweeters[i].tweeter_id, corpus.works[works[1]].doi);
    }
  }
  while (corpus.events.size() < params.events) {
    if (planted < params.tweeters) {
      size_t i = planted + rng.bounded(params.tweeters - planted);
      std::string doi;
      if (rng.chance(0.05)) {
        doi = "10.9999/x" + std::to_string(rng.bounded(1000000));
      } else {
        doi = corpus.works[rng.bounded(corpus.works.size())].doi;
      }
      add_event(corpus.tweeters[i].tweeter_id, doi);
    } else if (planted > 0) {
      // No distractors: planted tweeters only ever self-tweet, so the
      // planted truth stays the exact match set.
      size_t i = rng.bounded(planted);
      const auto& works = works_of_author[i];
      add_event(corpus.tweeters[i].tweeter_id,
                corpus.works[works[rng.bounded(works.size())]].doi);
    } else {
      break;
    }
  }

  // The planted truth doubles as the golden set.
  for (const auto& p : result.truth) corpus.golden.push_back({p.author_id, p.tweeter_id});
  return result;
}

void write_truth_csv(const std::string& path, const std::vector<PlantedPair>& truth) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_csv_row(out, {"author_id", "tweeter_id", "intended_step"});
  for (const auto& p : truth) {
    write_csv_row(out, {p.author_id, p.tweeter_id, std::to_string(p.intended_step)});
  }
}

}  // namespace scholarmatch
