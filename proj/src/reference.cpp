#include "scholarmatch/reference.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "scholarmatch/errors.hpp"
#include "scholarmatch/util.hpp"

namespace scholarmatch {

namespace {

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::string concat_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) out += t;
  return out;
}

std::string strip_spaces(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c != ' ') out += c;
  }
  return out;
}

}  // namespace

ReferenceEntity make_reference_author(const AuthorRecord& author, const HonorificSet& honorifics) {
  ReferenceEntity e;
  e.id = author.author_id;
  if (auto name = try_normalize_name(author.display_name, honorifics)) {
    e.tokens = name->tokens;
    e.variants = expand_variants(author.author_id, *name);
  }
  return e;
}

ReferenceEntity make_reference_tweeter(const TweeterProfile& tweeter,
                                       const HonorificSet& honorifics) {
  ReferenceEntity e;
  e.id = tweeter.tweeter_id;
  e.handle = normalize_handle(tweeter.handle);
  if (auto name = try_normalize_name(tweeter.profile_name, honorifics)) {
    e.tokens = name->tokens;
    e.variants = expand_variants(tweeter.tweeter_id, *name);
  }
  return e;
}

std::optional<PairwiseHit> pairwise_step(const MatchStep& step, const ReferenceEntity& author,
                                         const ReferenceEntity& tweeter) {
  if (step.field == MatchField::kHandle) {
    if (tweeter.handle.empty() || author.tokens.empty()) return std::nullopt;
    if (step.criteria == Criteria::kFullNameExact) {
      std::string key = concat_tokens(author.tokens);
      if (key == tweeter.handle) return PairwiseHit{-1, -1, key, tweeter.handle};
      return std::nullopt;
    }
    for (size_t v = 0; v < author.variants.size(); ++v) {
      const auto& var = author.variants[v];
      std::string key;
      switch (step.criteria) {
        case Criteria::kLastNameFirstToken:
          key = var.first_token + strip_spaces(var.last_name);
          break;
        case Criteria::kLastNameInitials:
          key = var.initials + strip_spaces(var.last_name);
          break;
        case Criteria::kLastNameFirstInitial:
          key = std::string(1, var.first_initial) + strip_spaces(var.last_name);
          break;
        default:
          return std::nullopt;  // substring/handle is never a step
      }
      if (key == tweeter.handle) {
        return PairwiseHit{static_cast<int16_t>(v), -1, key, tweeter.handle};
      }
    }
    return std::nullopt;
  }

  if (author.tokens.empty() || tweeter.tokens.empty()) return std::nullopt;
  std::string tweeter_full = join_tokens(tweeter.tokens);

  switch (step.criteria) {
    case Criteria::kFullNameExact: {
      std::string full = join_tokens(author.tokens);
      if (full == tweeter_full) return PairwiseHit{-1, -1, full, tweeter_full};
      return std::nullopt;
    }
    case Criteria::kFullNameSubstring: {
      // Whole-token contiguous run; mid-token hits do not count.
      size_t n = author.tokens.size(), m = tweeter.tokens.size();
      if (n > m) return std::nullopt;
      for (size_t start = 0; start + n <= m; ++start) {
        bool all = true;
        for (size_t k = 0; k < n; ++k) {
          if (author.tokens[k] != tweeter.tokens[start + k]) {
            all = false;
            break;
          }
        }
        if (all) {
          return PairwiseHit{-1, -1, join_tokens(author.tokens), tweeter_full};
        }
      }
      return std::nullopt;
    }
    default:
      break;
  }

  for (size_t v = 0; v < author.variants.size(); ++v) {
    const auto& a = author.variants[v];
    for (size_t u = 0; u < tweeter.variants.size(); ++u) {
      const auto& t = tweeter.variants[u];
      if (a.last_name != t.last_name) continue;
      bool hit = false;
      std::string value;
      switch (step.criteria) {
        case Criteria::kLastNameFirstToken:
          hit = a.first_token == t.first_token;
          value = a.first_token + ' ' + a.last_name;
          break;
        case Criteria::kLastNameInitials:
          hit = a.initials == t.initials;
          value = a.initials + ' ' + a.last_name;
          break;
        case Criteria::kLastNameFirstInitial:
          hit = a.first_initial == t.first_initial;
          value = std::string(1, a.first_initial) + ' ' + a.last_name;
          break;
        default:
          break;
      }
      if (hit) {
        return PairwiseHit{static_cast<int16_t>(v), static_cast<int16_t>(u), value, tweeter_full};
      }
    }
  }
  return std::nullopt;
}

RenderedOutcome brute_force_match(const Corpus& corpus, const HonorificSet& honorifics,
                                  uint16_t enabled_mask) {
  if (corpus.authors.size() > 1000 || corpus.tweeters.size() > 1000) {
    throw CorpusTooLarge("reference matcher is limited to 1,000 authors and 1,000 tweeters");
  }

  std::vector<ReferenceEntity> authors, tweeters;
  std::vector<std::vector<std::string>> author_dois, tweeter_dois;
  for (const auto& a : corpus.authors) authors.push_back(make_reference_author(a, honorifics));
  for (const auto& t : corpus.tweeters) tweeters.push_back(make_reference_tweeter(t, honorifics));

  // Per-entity DOI lists by direct scan, no shared index.
  author_dois.resize(authors.size());
  for (size_t i = 0; i < authors.size(); ++i) {
    for (const auto& w : corpus.works) {
      for (const auto& id : w.author_ids) {
        if (id == authors[i].id) {
          author_dois[i].push_back(w.doi);
          break;
        }
      }
    }
    std::sort(author_dois[i].begin(), author_dois[i].end());
    author_dois[i].erase(std::unique(author_dois[i].begin(), author_dois[i].end()),
                         author_dois[i].end());
  }
  tweeter_dois.resize(tweeters.size());
  for (size_t i = 0; i < tweeters.size(); ++i) {
    for (const auto& e : corpus.events) {
      if (e.tweeter_id == tweeters[i].id) tweeter_dois[i].push_back(e.doi);
    }
    std::sort(tweeter_dois[i].begin(), tweeter_dois[i].end());
    tweeter_dois[i].erase(std::unique(tweeter_dois[i].begin(), tweeter_dois[i].end()),
                          tweeter_dois[i].end());
  }

  // Candidate pairs in (author_id, tweeter_id) order.
  std::vector<size_t> author_order(authors.size()), tweeter_order(tweeters.size());
  for (size_t i = 0; i < author_order.size(); ++i) author_order[i] = i;
  for (size_t i = 0; i < tweeter_order.size(); ++i) tweeter_order[i] = i;
  std::sort(author_order.begin(), author_order.end(),
            [&](size_t x, size_t y) { return authors[x].id < authors[y].id; });
  std::sort(tweeter_order.begin(), tweeter_order.end(),
            [&](size_t x, size_t y) { return tweeters[x].id < tweeters[y].id; });

  RenderedOutcome out;
  out.enabled_mask = enabled_mask;
  std::set<std::string> seen_authors, seen_tweeters;
  size_t pair_count = 0;
  std::array<std::vector<size_t>, 9> rows_by_step;

  for (size_t ai : author_order) {
    for (size_t ti : tweeter_order) {
      bool shared = false;
      for (const auto& d : author_dois[ai]) {
        if (std::binary_search(tweeter_dois[ti].begin(), tweeter_dois[ti].end(), d)) {
          shared = true;
          break;
        }
      }
      if (!shared) continue;

      int first_step = 0;
      PairwiseHit first_hit;
      for (const auto& step : match_steps()) {
        if (!(enabled_mask & (1u << (step.step_id - 1)))) continue;
        auto hit = pairwise_step(step, authors[ai], tweeters[ti]);
        if (!hit) continue;
        out.independent[step.step_id - 1].emplace_back(authors[ai].id, tweeters[ti].id);
        if (first_step == 0) {
          first_step = step.step_id;
          first_hit = *hit;
        }
      }
      if (first_step != 0) {
        rows_by_step[first_step - 1].push_back(out.rows.size());
        out.rows.push_back({authors[ai].id, tweeters[ti].id, first_step, first_hit.author_value,
                            first_hit.tweeter_value});
      }
    }
  }

  // Cumulative counts in step order over first-step assignments.
  for (int s = 1; s <= 9; ++s) {
    for (size_t idx : rows_by_step[s - 1]) {
      seen_authors.insert(out.rows[idx].author_id);
      seen_tweeters.insert(out.rows[idx].tweeter_id);
      ++pair_count;
    }
    out.cumulative[s - 1] = {seen_authors.size(), seen_tweeters.size(), pair_count};
  }

  std::sort(out.rows.begin(), out.rows.end(), [](const MatchRow& x, const MatchRow& y) {
    if (x.step_id != y.step_id) return x.step_id < y.step_id;
    if (x.author_id != y.author_id) return x.author_id < y.author_id;
    return x.tweeter_id < y.tweeter_id;
  });
  for (auto& ind : out.independent) std::sort(ind.begin(), ind.end());
  return out;
}

}  // namespace scholarmatch
