#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace scholarmatch {

struct AuthorRecord {
  std::string author_id;
  std::string display_name;  // may be empty; such records never match
  std::string orcid;         // optional
  std::string country;       // optional ISO-3166 alpha-2, uppercase
};

struct ConceptScore {
  std::string concept_name;
  int level = 0;  // level 0 denotes a discipline
  double score = 0.0;
};

struct WorkRecord {
  std::string work_id;
  std::string doi;  // normalized
  std::vector<std::string> author_ids;
  std::vector<ConceptScore> concepts;
};

struct TweetEvent {
  std::string tweet_id;
  std::string tweeter_id;
  std::string doi;  // normalized
};

struct TweeterProfile {
  std::string tweeter_id;
  std::string handle;
  std::string profile_name;
};

struct GoldenPair {
  std::string author_id;
  std::string tweeter_id;
  bool operator==(const GoldenPair&) const = default;
};

struct Corpus {
  std::vector<AuthorRecord> authors;
  std::vector<WorkRecord> works;
  std::vector<TweetEvent> events;
  std::vector<TweeterProfile> tweeters;
  std::vector<GoldenPair> golden;
};

struct CorpusPaths {
  std::string authors;
  std::string works;
  std::string events;
  std::string tweeters;
  std::string golden;
};

struct FileLoadStats {
  std::string name;  // authors, works, events, tweeters, golden
  std::string path;
  size_t rows_read = 0;
  size_t loaded = 0;
  size_t skipped = 0;
  std::map<std::string, size_t> skip_reasons;
};

struct LoadReport {
  std::vector<FileLoadStats> files;

  std::string to_text() const;
  std::string to_json() const;
};

// Lowercases, trims, strips URL prefixes ("http://doi.org/",
// "https://doi.org/", "https://dx.doi.org/", "doi:"). The result must
// start with "10.".
std::string normalize_doi(std::string_view raw);  // throws InvalidDoi
std::optional<std::string> try_normalize_doi(std::string_view raw);

// Loads all five datasets. Malformed rows are skipped and counted per
// reason; a file whose malformed fraction exceeds 10% is fatal
// (ExcessiveMalformedRows). Duplicate ids keep the first occurrence.
Corpus load_corpus(const CorpusPaths& paths, LoadReport* report);

// The DOI-block join index. Id vectors are sorted and duplicate-free.
struct DoiIndex {
  std::unordered_map<std::string, std::vector<std::string>> authors_by_doi;
  std::unordered_map<std::string, std::vector<std::string>> tweeters_by_doi;
};

DoiIndex build_doi_index(const std::vector<WorkRecord>& works,
                         const std::vector<TweetEvent>& events);

// Writers matching the loaders, used by the synthetic generator and for
// round-trip checks.
void write_authors_csv(const std::string& path, const std::vector<AuthorRecord>& rows);
void write_works_jsonl(const std::string& path, const std::vector<WorkRecord>& rows);
void write_events_csv(const std::string& path, const std::vector<TweetEvent>& rows);
void write_tweeters_csv(const std::string& path, const std::vector<TweeterProfile>& rows);
void write_golden_csv(const std::string& path, const std::vector<GoldenPair>& rows);
void write_corpus_files(const Corpus& corpus, const CorpusPaths& paths);

}  // namespace scholarmatch
