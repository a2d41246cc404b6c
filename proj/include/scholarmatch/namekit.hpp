#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace scholarmatch {

// A personal name reduced to lowercase ASCII letter tokens: diacritics
// folded, punctuation and digits dropped, honorific tokens removed.
struct NormalizedName {
  std::vector<std::string> tokens;

  bool empty() const { return tokens.empty(); }
  size_t size() const { return tokens.size(); }
  std::string joined() const;  // tokens joined with single spaces
};

// One first/last decomposition of a normalized name, with the derived
// fields used by the matching criteria. All fields lowercase.
struct NameVariant {
  std::string owner_id;
  std::string first_name;   // tokens[0..i), space-joined
  std::string last_name;    // tokens[i..n), space-joined
  std::string initials;     // first letter of each first-name token
  char first_initial = 0;   // initials[0]
  std::string first_token;  // first first-name token
};

using HonorificSet = std::unordered_set<std::string>;

// The default honorific/title token list. Fixed so results are
// reproducible run to run; a config override exists for experiments.
const std::vector<std::string>& default_honorific_list();
const HonorificSet& default_honorifics();
HonorificSet make_honorifics(const std::vector<std::string>& tokens);

// Normalization pipeline, applied in order: diacritic folding to ASCII,
// lowercasing, hyphen -> space, apostrophe deleted, every other non-letter
// dropped, whitespace collapsed, honorific tokens removed.
// Returns nullopt when no tokens remain.
std::optional<NormalizedName> try_normalize_name(std::string_view raw,
                                                 const HonorificSet& honorifics = default_honorifics());
// Same, but throws EmptyName when no tokens remain.
NormalizedName normalize_name(std::string_view raw,
                              const HonorificSet& honorifics = default_honorifics());

// All first/last split points of a multi-token name: a name with n >= 2
// tokens yields n-1 variants; a single-token name yields none (callers
// record the skip and fall back to full-name criteria only).
std::vector<NameVariant> expand_variants(std::string_view owner_id, const NormalizedName& name);

// Tokens joined with no separator, for comparisons against handles.
std::string concat_full(const NormalizedName& name);

// Handle normalization: strip one leading '@', lowercase, keep ASCII
// letters only. May return an empty string (handle unusable).
std::string normalize_handle(std::string_view raw);

// Folds one codepoint to zero or more lowercase ASCII chars, appended to
// `out`. Hyphen-like and space-like codepoints map to '-' and ' ';
// apostrophe-like ones to '\''. Unmapped codepoints fold to nothing.
void fold_codepoint(char32_t cp, std::string& out);

// Decodes the UTF-8 codepoint starting at s[i]; advances i. Invalid bytes
// decode as U+FFFD and advance one byte.
char32_t utf8_next(std::string_view s, size_t& i);

}  // namespace scholarmatch
