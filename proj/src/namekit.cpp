#include "scholarmatch/namekit.hpp"

#include <algorithm>
#include <array>

#include "scholarmatch/errors.hpp"
#include "scholarmatch/util.hpp"

namespace scholarmatch {

std::string NormalizedName::joined() const { return join(tokens, " "); }

const std::vector<std::string>& default_honorific_list() {
  static const std::vector<std::string> list = {"dr",  "prof", "professor", "phd", "md",
                                                "msc", "bsc",  "mr",        "mrs", "ms",
                                                "sir", "jr",   "sr",        "ii",  "iii"};
  return list;
}

const HonorificSet& default_honorifics() {
  static const HonorificSet set = make_honorifics(default_honorific_list());
  return set;
}

HonorificSet make_honorifics(const std::vector<std::string>& tokens) {
  HonorificSet set;
  for (const auto& t : tokens) {
    if (!t.empty()) set.insert(lower_ascii(trim(t)));
  }
  return set;
}

char32_t utf8_next(std::string_view s, size_t& i) {
  unsigned char b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++i;
    return 0xFFFD;
  }
  if (i + static_cast<size_t>(len) > s.size()) {
    ++i;
    return 0xFFFD;
  }
  for (int k = 1; k < len; ++k) {
    unsigned char b = static_cast<unsigned char>(s[i + static_cast<size_t>(k)]);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  i += static_cast<size_t>(len);
  return cp;
}

namespace {

struct FoldRange {
  char32_t lo, hi;
  const char* repl;
};

// Latin diacritic folding. Each range maps to one ASCII replacement; the
// table covers Latin-1 Supplement, Latin Extended-A, the common parts of
// Extended-B, and Latin Extended Additional (Vietnamese). Anything not
// covered folds to nothing and is dropped as a non-letter.
constexpr FoldRange kFoldRanges[] = {
    // Latin-1 Supplement
    {0x00C0, 0x00C5, "a"}, {0x00C6, 0x00C6, "ae"}, {0x00C7, 0x00C7, "c"},
    {0x00C8, 0x00CB, "e"}, {0x00CC, 0x00CF, "i"},  {0x00D0, 0x00D0, "d"},
    {0x00D1, 0x00D1, "n"}, {0x00D2, 0x00D6, "o"},  {0x00D8, 0x00D8, "o"},
    {0x00D9, 0x00DC, "u"}, {0x00DD, 0x00DD, "y"},  {0x00DE, 0x00DE, "th"},
    {0x00DF, 0x00DF, "ss"},
    {0x00E0, 0x00E5, "a"}, {0x00E6, 0x00E6, "ae"}, {0x00E7, 0x00E7, "c"},
    {0x00E8, 0x00EB, "e"}, {0x00EC, 0x00EF, "i"},  {0x00F0, 0x00F0, "d"},
    {0x00F1, 0x00F1, "n"}, {0x00F2, 0x00F6, "o"},  {0x00F8, 0x00F8, "o"},
    {0x00F9, 0x00FC, "u"}, {0x00FD, 0x00FD, "y"},  {0x00FE, 0x00FE, "th"},
    {0x00FF, 0x00FF, "y"},
    // Latin Extended-A
    {0x0100, 0x0105, "a"}, {0x0106, 0x010D, "c"},  {0x010E, 0x0111, "d"},
    {0x0112, 0x011B, "e"}, {0x011C, 0x0123, "g"},  {0x0124, 0x0127, "h"},
    {0x0128, 0x0131, "i"}, {0x0132, 0x0133, "ij"}, {0x0134, 0x0135, "j"},
    {0x0136, 0x0138, "k"}, {0x0139, 0x0142, "l"},  {0x0143, 0x014B, "n"},
    {0x014C, 0x0151, "o"}, {0x0152, 0x0153, "oe"}, {0x0154, 0x0159, "r"},
    {0x015A, 0x0161, "s"}, {0x0162, 0x0167, "t"},  {0x0168, 0x0173, "u"},
    {0x0174, 0x0175, "w"}, {0x0176, 0x0178, "y"},  {0x0179, 0x017E, "z"},
    {0x017F, 0x017F, "s"},
    // Latin Extended-B, curated
    {0x0180, 0x0183, "b"}, {0x0187, 0x0188, "c"},  {0x018A, 0x018C, "d"},
    {0x0191, 0x0192, "f"}, {0x0193, 0x0193, "g"},  {0x0197, 0x0197, "i"},
    {0x0198, 0x0199, "k"}, {0x019A, 0x019B, "l"},  {0x019D, 0x019E, "n"},
    {0x01A0, 0x01A1, "o"}, {0x01A4, 0x01A5, "p"},  {0x01AB, 0x01AD, "t"},
    {0x01AF, 0x01B0, "u"}, {0x01B3, 0x01B4, "y"},  {0x01B5, 0x01B6, "z"},
    {0x01CD, 0x01CE, "a"}, {0x01CF, 0x01D0, "i"},  {0x01D1, 0x01D2, "o"},
    {0x01D3, 0x01DC, "u"}, {0x01DE, 0x01E1, "a"},  {0x01E2, 0x01E3, "ae"},
    {0x01E4, 0x01E7, "g"}, {0x01E8, 0x01E9, "k"},  {0x01EA, 0x01ED, "o"},
    {0x01F4, 0x01F5, "g"}, {0x01F8, 0x01F9, "n"},  {0x01FA, 0x01FB, "a"},
    {0x01FC, 0x01FD, "ae"}, {0x01FE, 0x01FF, "o"},
    {0x0200, 0x0203, "a"}, {0x0204, 0x0207, "e"},  {0x0208, 0x020B, "i"},
    {0x020C, 0x020F, "o"}, {0x0210, 0x0213, "r"},  {0x0214, 0x0217, "u"},
    {0x0218, 0x0219, "s"}, {0x021A, 0x021B, "t"},  {0x021E, 0x021F, "h"},
    {0x0226, 0x0227, "a"}, {0x0228, 0x0229, "e"},  {0x022A, 0x0231, "o"},
    {0x0232, 0x0233, "y"},
    // Latin Extended Additional
    {0x1E00, 0x1E01, "a"}, {0x1E02, 0x1E07, "b"},  {0x1E08, 0x1E09, "c"},
    {0x1E0A, 0x1E13, "d"}, {0x1E14, 0x1E1D, "e"},  {0x1E1E, 0x1E1F, "f"},
    {0x1E20, 0x1E21, "g"}, {0x1E22, 0x1E2B, "h"},  {0x1E2C, 0x1E2F, "i"},
    {0x1E30, 0x1E35, "k"}, {0x1E36, 0x1E3D, "l"},  {0x1E3E, 0x1E43, "m"},
    {0x1E44, 0x1E4B, "n"}, {0x1E4C, 0x1E53, "o"},  {0x1E54, 0x1E57, "p"},
    {0x1E58, 0x1E5F, "r"}, {0x1E60, 0x1E69, "s"},  {0x1E6A, 0x1E71, "t"},
    {0x1E72, 0x1E7B, "u"}, {0x1E7C, 0x1E7F, "v"},  {0x1E80, 0x1E89, "w"},
    {0x1E8A, 0x1E8D, "x"}, {0x1E8E, 0x1E8F, "y"},  {0x1E90, 0x1E95, "z"},
    {0x1E96, 0x1E96, "h"}, {0x1E97, 0x1E97, "t"},  {0x1E98, 0x1E98, "w"},
    {0x1E99, 0x1E99, "y"}, {0x1E9A, 0x1E9A, "a"},  {0x1E9B, 0x1E9B, "s"},
    {0x1E9E, 0x1E9E, "ss"},
    {0x1EA0, 0x1EB7, "a"}, {0x1EB8, 0x1EC7, "e"},  {0x1EC8, 0x1ECB, "i"},
    {0x1ECC, 0x1EE3, "o"}, {0x1EE4, 0x1EF1, "u"},  {0x1EF2, 0x1EF9, "y"},
    // Ligatures
    {0xFB00, 0xFB00, "ff"}, {0xFB01, 0xFB01, "fi"}, {0xFB02, 0xFB02, "fl"},
    {0xFB03, 0xFB03, "ffi"}, {0xFB04, 0xFB04, "ffl"}, {0xFB05, 0xFB06, "st"},
};

bool is_space_like(char32_t cp) {
  return cp == 0x00A0 || (cp >= 0x2000 && cp <= 0x200A) || cp == 0x202F || cp == 0x205F ||
         cp == 0x3000;
}

bool is_hyphen_like(char32_t cp) {
  return (cp >= 0x2010 && cp <= 0x2015) || cp == 0x2212;
}

bool is_apostrophe_like(char32_t cp) {
  return cp == 0x2018 || cp == 0x2019 || cp == 0x201B || cp == 0x02BC;
}

}  // namespace

void fold_codepoint(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    char c = static_cast<char>(cp);
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    out += c;
    return;
  }
  if (cp >= 0x0300 && cp <= 0x036F) return;  // combining marks
  if (is_space_like(cp)) {
    out += ' ';
    return;
  }
  if (is_hyphen_like(cp)) {
    out += '-';
    return;
  }
  if (is_apostrophe_like(cp)) {
    out += '\'';
    return;
  }
  for (const auto& r : kFoldRanges) {
    if (cp >= r.lo && cp <= r.hi) {
      out += r.repl;
      return;
    }
  }
  // Unmapped: drops later as a non-letter.
}

std::optional<NormalizedName> try_normalize_name(std::string_view raw,
                                                 const HonorificSet& honorifics) {
  // Fold to ASCII (already lowercased by fold_codepoint).
  std::string folded;
  folded.reserve(raw.size());
  size_t i = 0;
  while (i < raw.size()) fold_codepoint(utf8_next(raw, i), folded);

  // Hyphen -> space, apostrophe deleted, other non-letters dropped.
  std::string letters;
  letters.reserve(folded.size());
  for (char c : folded) {
    if (c >= 'a' && c <= 'z') {
      letters += c;
    } else if (c == '-' || c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      letters += ' ';
    }
    // apostrophes, digits, remaining punctuation: dropped
  }

  NormalizedName name;
  size_t pos = 0;
  while (pos < letters.size()) {
    while (pos < letters.size() && letters[pos] == ' ') ++pos;
    size_t start = pos;
    while (pos < letters.size() && letters[pos] != ' ') ++pos;
    if (pos > start) {
      std::string token = letters.substr(start, pos - start);
      if (!honorifics.count(token)) name.tokens.push_back(std::move(token));
    }
  }
  if (name.tokens.empty()) return std::nullopt;
  return name;
}

NormalizedName normalize_name(std::string_view raw, const HonorificSet& honorifics) {
  auto name = try_normalize_name(raw, honorifics);
  if (!name) throw EmptyName(std::string(raw));
  return *name;
}

std::vector<NameVariant> expand_variants(std::string_view owner_id, const NormalizedName& name) {
  std::vector<NameVariant> out;
  size_t n = name.tokens.size();
  if (n < 2) return out;
  out.reserve(n - 1);
  for (size_t split = 1; split < n; ++split) {
    NameVariant v;
    v.owner_id = std::string(owner_id);
    for (size_t k = 0; k < split; ++k) {
      if (k) v.first_name += ' ';
      v.first_name += name.tokens[k];
      v.initials += name.tokens[k][0];
    }
    for (size_t k = split; k < n; ++k) {
      if (k > split) v.last_name += ' ';
      v.last_name += name.tokens[k];
    }
    v.first_initial = v.initials[0];
    v.first_token = name.tokens[0];
    out.push_back(std::move(v));
  }
  return out;
}

std::string concat_full(const NormalizedName& name) {
  std::string out;
  for (const auto& t : name.tokens) out += t;
  return out;
}

std::string normalize_handle(std::string_view raw) {
  std::string_view s = trim(raw);
  if (!s.empty() && s.front() == '@') s.remove_prefix(1);
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c >= 'a' && c <= 'z') out += c;
    else if (c >= 'A' && c <= 'Z') out += static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace scholarmatch
