#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "scholarmatch/corpus.hpp"
#include "scholarmatch/namekit.hpp"

namespace scholarmatch {

enum class Criteria : uint8_t {
  kFullNameExact,
  kFullNameSubstring,
  kLastNameInitials,
  kLastNameFirstToken,
  kLastNameFirstInitial,
};

enum class MatchField : uint8_t { kHandle, kProfileName };

struct MatchStep {
  int step_id;  // 1-based position in the precision hierarchy
  Criteria criteria;
  MatchField field;
};

// The nine steps in fixed order, most precise first. The substring
// criterion is never paired with the handle field.
const std::array<MatchStep, 9>& match_steps();

std::string_view criteria_token(Criteria c);   // snake_case, for CSV
std::string_view criteria_label(Criteria c);   // display text
std::string_view field_token(MatchField f);
std::string_view field_label(MatchField f);

constexpr uint16_t kAllStepsMask = 0x1FF;
uint16_t steps_mask_without(const std::vector<int>& disabled_steps);

// One DOI-blocked author/tweeter pairing.
struct CandidatePair {
  std::string author_id;
  std::string tweeter_id;
  std::vector<std::string> shared_dois;  // sorted, unique, non-empty
};

// Cross product of author ids and tweeter ids per shared DOI, merged
// across DOIs, sorted by (author_id, tweeter_id).
std::vector<CandidatePair> generate_candidates(const DoiIndex& index);

// Precomputed comparison forms for one author.
struct AuthorForms {
  std::string id;
  std::vector<std::string> tokens;  // empty when the name is unusable
  std::string full_joined;          // tokens joined by spaces
  std::string full_concat;          // tokens joined by nothing
  std::vector<NameVariant> variants;
  // Handle-field keys, one per variant: first_token / initials /
  // first_initial prepended to the concatenated last-name tokens.
  std::vector<std::string> key_ft_concat;
  std::vector<std::string> key_ini_concat;
  std::vector<std::string> key_fi_concat;
  // Profile-field composite keys, one per variant: last name + '\x1f' +
  // first_token / initials / first_initial.
  std::vector<std::string> key_last_ft;
  std::vector<std::string> key_last_ini;
  std::vector<std::string> key_last_fi;

  bool usable() const { return !tokens.empty(); }
};

// Precomputed comparison forms for one tweeter. Profile-side composite
// keys are sorted by (key, variant) so lookups return the lowest variant.
struct TweeterForms {
  std::string id;
  std::string handle;               // normalized, may be empty
  std::vector<std::string> tokens;  // normalized profile name
  std::string full_joined;
  std::vector<NameVariant> variants;
  std::vector<std::pair<std::string, uint16_t>> key_last_ft;
  std::vector<std::pair<std::string, uint16_t>> key_last_ini;
  std::vector<std::pair<std::string, uint16_t>> key_last_fi;
  std::unordered_set<std::string> token_runs;  // contiguous token runs, space-joined
};

struct FormsStats {
  size_t authors_empty_name = 0;     // excluded entirely
  size_t authors_single_token = 0;   // no variants; full-name criteria only
  size_t tweeters_empty_handle = 0;  // handle criteria unusable
  size_t tweeters_empty_profile = 0; // profile criteria unusable
};

AuthorForms build_author_forms(const AuthorRecord& author, const HonorificSet& honorifics);
TweeterForms build_tweeter_forms(const TweeterProfile& tweeter, const HonorificSet& honorifics);

struct FormsTables {
  std::vector<AuthorForms> authors;
  std::vector<TweeterForms> tweeters;
  std::unordered_map<std::string, uint32_t> author_index;
  std::unordered_map<std::string, uint32_t> tweeter_index;
  FormsStats stats;
};

// Builds forms for the whole corpus, in parallel.
FormsTables build_forms(const Corpus& corpus, const HonorificSet& honorifics, int workers);

struct CandidateRef {
  uint32_t author;
  uint32_t tweeter;
};

// Resolves string candidates onto forms-table indexes (drops candidates
// whose ids never made it into the corpus tables).
std::vector<CandidateRef> to_candidate_refs(const std::vector<CandidatePair>& candidates,
                                            const FormsTables& forms);

// Which variant pair witnessed a match; -1 where the step has no variant
// on that side (full-name criteria, or the handle side).
struct StepWitness {
  int16_t author_variant = -1;
  int16_t tweeter_variant = -1;
};

struct MatchedPairRec {
  uint32_t author;
  uint32_t tweeter;
  uint8_t step;  // 1..9
  StepWitness witness;
};

struct StepCounts {
  size_t authors = 0;
  size_t tweeters = 0;
  size_t pairs = 0;
};

struct MatchOptions {
  int workers = 0;  // 0 = library default
  uint16_t enabled_mask = kAllStepsMask;
};

// Index-space result of the hierarchical matching run.
struct MatchOutcome {
  std::vector<MatchedPairRec> combined;  // candidate order (author_id, tweeter_id)
  // All pairs each step matches on its own, ignoring the hierarchy.
  std::array<std::vector<CandidateRef>, 9> independent;
  std::array<StepCounts, 9> cumulative;  // after each step, enabled steps only
  uint16_t enabled_mask = kAllStepsMask;
};

// Evaluates every enabled step for every candidate with equality-key
// lookups. Deterministic for a given corpus regardless of worker count.
MatchOutcome run_hierarchy(const FormsTables& forms, const std::vector<CandidateRef>& candidates,
                           const MatchOptions& options);

// Structural checks: new-pairs sets partition the combined set, cumulative
// counts are non-decreasing, the final row equals the combined counts, and
// every pair's step is the first enabled step that matches it. Throws
// std::logic_error on violation. Run after every matching run.
void validate_outcome(const MatchOutcome& outcome);

// The per-criterion projection of the matched author variant, and the
// tweeter-side value it matched (normalized handle or profile name).
std::string render_author_value(const MatchStep& step, const AuthorForms& forms, int16_t variant);
std::string render_tweeter_value(const MatchStep& step, const TweeterForms& forms);

struct MatchRow {
  std::string author_id;
  std::string tweeter_id;
  int step_id;
  std::string author_value;
  std::string tweeter_value;
};

using IdPair = std::pair<std::string, std::string>;

// String-space view of an outcome; what exports, evaluation, and the
// serial-reference comparison consume.
struct RenderedOutcome {
  std::vector<MatchRow> rows;  // sorted by (step_id, author_id, tweeter_id)
  std::array<std::vector<IdPair>, 9> independent;  // each sorted
  std::array<StepCounts, 9> cumulative;
  uint16_t enabled_mask = kAllStepsMask;

  std::vector<IdPair> combined_pairs() const;
  std::vector<IdPair> pairs_at_step(int step_id) const;
  std::vector<IdPair> pairs_through_step(int step_id) const;
};

RenderedOutcome render_outcome(const MatchOutcome& outcome, const FormsTables& forms);

bool rendered_equal(const RenderedOutcome& a, const RenderedOutcome& b, std::string* diff);

void write_matches_csv(const std::string& path, const RenderedOutcome& outcome);

}  // namespace scholarmatch
