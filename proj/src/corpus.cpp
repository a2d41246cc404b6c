#include "scholarmatch/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "scholarmatch/csv.hpp"
#include "scholarmatch/errors.hpp"
#include "scholarmatch/util.hpp"

namespace scholarmatch {

using nlohmann::json;

std::optional<std::string> try_normalize_doi(std::string_view raw) {
  std::string s = lower_ascii(trim(raw));
  static const std::string_view prefixes[] = {"http://doi.org/", "https://doi.org/",
                                              "https://dx.doi.org/", "doi:"};
  bool stripped = true;
  while (stripped) {
    stripped = false;
    for (auto p : prefixes) {
      if (starts_with(s, p)) {
        s.erase(0, p.size());
        stripped = true;
      }
    }
  }
  if (s.size() < 3 || !starts_with(s, "10.")) return std::nullopt;
  return s;
}

std::string normalize_doi(std::string_view raw) {
  auto doi = try_normalize_doi(raw);
  if (!doi) throw InvalidDoi(std::string(raw));
  return *doi;
}

namespace {

void finish_stats(FileLoadStats& stats) {
  // Duplicates are well-formed rows dropped by first-occurrence-wins, so
  // they stay out of the dirt fraction. The 10% tolerance is strict: a
  // file at exactly 10% still loads.
  size_t malformed = stats.skipped;
  for (const char* reason : {"duplicate_id", "duplicate_pair"}) {
    auto it = stats.skip_reasons.find(reason);
    if (it != stats.skip_reasons.end()) malformed -= it->second;
  }
  if (malformed * 10 > stats.rows_read) {
    std::ostringstream msg;
    msg << stats.name << ": " << malformed << " of " << stats.rows_read
        << " rows malformed (>10%)";
    throw ExcessiveMalformedRows(msg.str());
  }
}

void skip(FileLoadStats& stats, const std::string& reason) {
  ++stats.skipped;
  ++stats.skip_reasons[reason];
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileMissing(path);
  return in;
}

bool valid_country(const std::string& s) {
  if (s.size() != 2) return false;
  for (char c : s) {
    if (!((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'))) return false;
  }
  return true;
}

std::pair<std::vector<AuthorRecord>, FileLoadStats> load_authors(const std::string& path) {
  FileLoadStats stats{"authors", path, 0, 0, 0, {}};
  auto in = open_input(path);
  CsvReader reader(in, {"author_id", "display_name", "orcid", "country"}, "authors");
  std::vector<AuthorRecord> rows;
  std::unordered_set<std::string> seen;
  while (auto row = reader.next_row()) {
    ++stats.rows_read;
    if (row->size() != 4) {
      skip(stats, "wrong_field_count");
      continue;
    }
    AuthorRecord rec{(*row)[0], (*row)[1], (*row)[2], (*row)[3]};
    if (rec.author_id.empty()) {
      skip(stats, "missing_author_id");
      continue;
    }
    if (!rec.country.empty()) {
      if (!valid_country(rec.country)) {
        skip(stats, "bad_country");
        continue;
      }
      for (char& c : rec.country) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    if (!seen.insert(rec.author_id).second) {
      skip(stats, "duplicate_id");
      continue;
    }
    rows.push_back(std::move(rec));
    ++stats.loaded;
  }
  finish_stats(stats);
  return {std::move(rows), std::move(stats)};
}

std::pair<std::vector<WorkRecord>, FileLoadStats> load_works(const std::string& path) {
  FileLoadStats stats{"works", path, 0, 0, 0, {}};
  auto in = open_input(path);
  std::vector<WorkRecord> rows;
  std::unordered_set<std::string> seen;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++stats.rows_read;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      skip(stats, "bad_json");
      continue;
    }
    WorkRecord rec;
    if (!j.contains("work_id") || !j["work_id"].is_string()) {
      skip(stats, "missing_work_id");
      continue;
    }
    rec.work_id = j["work_id"].get<std::string>();
    if (rec.work_id.empty()) {
      skip(stats, "missing_work_id");
      continue;
    }
    auto doi = j.contains("doi") && j["doi"].is_string()
                   ? try_normalize_doi(j["doi"].get<std::string>())
                   : std::nullopt;
    if (!doi) {
      skip(stats, "invalid_doi");
      continue;
    }
    rec.doi = *doi;
    if (!j.contains("author_ids") || !j["author_ids"].is_array() || j["author_ids"].empty()) {
      skip(stats, "missing_author_ids");
      continue;
    }
    bool ok = true;
    for (const auto& a : j["author_ids"]) {
      if (!a.is_string() || a.get<std::string>().empty()) {
        ok = false;
        break;
      }
      rec.author_ids.push_back(a.get<std::string>());
    }
    if (!ok) {
      skip(stats, "missing_author_ids");
      continue;
    }
    if (j.contains("concepts")) {
      if (!j["concepts"].is_array()) {
        skip(stats, "bad_concepts");
        continue;
      }
      for (const auto& c : j["concepts"]) {
        if (!c.is_object() || !c.contains("name") || !c["name"].is_string() ||
            !c.contains("level") || !c["level"].is_number_integer() || !c.contains("score") ||
            !c["score"].is_number()) {
          ok = false;
          break;
        }
        ConceptScore cs{c["name"].get<std::string>(), c["level"].get<int>(),
                        c["score"].get<double>()};
        if (cs.concept_name.empty() || cs.level < 0 || cs.score < 0.0 || cs.score > 1.0) {
          ok = false;
          break;
        }
        rec.concepts.push_back(std::move(cs));
      }
    }
    if (!ok) {
      skip(stats, "bad_concepts");
      continue;
    }
    if (!seen.insert(rec.work_id).second) {
      skip(stats, "duplicate_id");
      continue;
    }
    rows.push_back(std::move(rec));
    ++stats.loaded;
  }
  finish_stats(stats);
  return {std::move(rows), std::move(stats)};
}

std::pair<std::vector<TweetEvent>, FileLoadStats> load_events(const std::string& path) {
  FileLoadStats stats{"events", path, 0, 0, 0, {}};
  auto in = open_input(path);
  CsvReader reader(in, {"tweet_id", "tweeter_id", "doi"}, "events");
  std::vector<TweetEvent> rows;
  while (auto row = reader.next_row()) {
    ++stats.rows_read;
    if (row->size() != 3) {
      skip(stats, "wrong_field_count");
      continue;
    }
    if ((*row)[0].empty() || (*row)[1].empty()) {
      skip(stats, "missing_field");
      continue;
    }
    auto doi = try_normalize_doi((*row)[2]);
    if (!doi) {
      skip(stats, "invalid_doi");
      continue;
    }
    rows.push_back(TweetEvent{std::move((*row)[0]), std::move((*row)[1]), std::move(*doi)});
    ++stats.loaded;
  }
  finish_stats(stats);
  return {std::move(rows), std::move(stats)};
}

std::pair<std::vector<TweeterProfile>, FileLoadStats> load_tweeters(const std::string& path) {
  FileLoadStats stats{"tweeters", path, 0, 0, 0, {}};
  auto in = open_input(path);
  CsvReader reader(in, {"tweeter_id", "handle", "profile_name"}, "tweeters");
  std::vector<TweeterProfile> rows;
  std::unordered_set<std::string> seen;
  while (auto row = reader.next_row()) {
    ++stats.rows_read;
    if (row->size() != 3) {
      skip(stats, "wrong_field_count");
      continue;
    }
    TweeterProfile rec{(*row)[0], (*row)[1], (*row)[2]};
    if (rec.tweeter_id.empty()) {
      skip(stats, "missing_tweeter_id");
      continue;
    }
    if (rec.handle.empty()) {
      skip(stats, "missing_handle");
      continue;
    }
    if (!seen.insert(rec.tweeter_id).second) {
      skip(stats, "duplicate_id");
      continue;
    }
    rows.push_back(std::move(rec));
    ++stats.loaded;
  }
  finish_stats(stats);
  return {std::move(rows), std::move(stats)};
}

std::pair<std::vector<GoldenPair>, FileLoadStats> load_golden(const std::string& path) {
  FileLoadStats stats{"golden", path, 0, 0, 0, {}};
  auto in = open_input(path);
  CsvReader reader(in, {"author_id", "tweeter_id"}, "golden");
  std::vector<GoldenPair> rows;
  std::unordered_set<std::string> seen;
  while (auto row = reader.next_row()) {
    ++stats.rows_read;
    if (row->size() != 2) {
      skip(stats, "wrong_field_count");
      continue;
    }
    if ((*row)[0].empty() || (*row)[1].empty()) {
      skip(stats, "missing_field");
      continue;
    }
    if (!seen.insert((*row)[0] + '\x1f' + (*row)[1]).second) {
      skip(stats, "duplicate_pair");
      continue;
    }
    rows.push_back(GoldenPair{std::move((*row)[0]), std::move((*row)[1])});
    ++stats.loaded;
  }
  finish_stats(stats);
  return {std::move(rows), std::move(stats)};
}

}  // namespace

Corpus load_corpus(const CorpusPaths& paths, LoadReport* report) {
  // One worker per file; each collection has a single writer.
  auto fa = std::async(std::launch::async, load_authors, paths.authors);
  auto fw = std::async(std::launch::async, load_works, paths.works);
  auto fe = std::async(std::launch::async, load_events, paths.events);
  auto ft = std::async(std::launch::async, load_tweeters, paths.tweeters);
  auto fg = std::async(std::launch::async, load_golden, paths.golden);

  Corpus corpus;
  LoadReport rep;
  auto take = [&rep](auto& fut, auto& dest) {
    auto [rows, stats] = fut.get();
    dest = std::move(rows);
    rep.files.push_back(std::move(stats));
  };
  take(fa, corpus.authors);
  take(fw, corpus.works);
  take(fe, corpus.events);
  take(ft, corpus.tweeters);
  take(fg, corpus.golden);
  if (report) *report = std::move(rep);
  return corpus;
}

std::string LoadReport::to_text() const {
  std::ostringstream out;
  out << "load report\n";
  for (const auto& f : files) {
    out << "  " << f.name << ": " << f.loaded << " loaded, " << f.skipped << " skipped";
    if (!f.skip_reasons.empty()) {
      out << " (";
      bool first = true;
      for (const auto& [reason, count] : f.skip_reasons) {
        if (!first) out << ", ";
        out << reason << "=" << count;
        first = false;
      }
      out << ")";
    }
    out << "  [" << f.path << "]\n";
  }
  return out.str();
}

std::string LoadReport::to_json() const {
  json j;
  j["files"] = json::array();
  for (const auto& f : files) {
    json jf;
    jf["name"] = f.name;
    jf["path"] = f.path;
    jf["rows_read"] = f.rows_read;
    jf["loaded"] = f.loaded;
    jf["skipped"] = f.skipped;
    jf["skip_reasons"] = f.skip_reasons;
    j["files"].push_back(std::move(jf));
  }
  return j.dump(2) + "\n";
}

DoiIndex build_doi_index(const std::vector<WorkRecord>& works,
                         const std::vector<TweetEvent>& events) {
  DoiIndex index;
  for (const auto& w : works) {
    auto& ids = index.authors_by_doi[w.doi];
    ids.insert(ids.end(), w.author_ids.begin(), w.author_ids.end());
  }
  for (const auto& e : events) {
    index.tweeters_by_doi[e.doi].push_back(e.tweeter_id);
  }
  auto dedupe = [](std::unordered_map<std::string, std::vector<std::string>>& m) {
    for (auto& [doi, ids] : m) {
      std::sort(ids.begin(), ids.end());
      ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    }
  };
  dedupe(index.authors_by_doi);
  dedupe(index.tweeters_by_doi);
  return index;
}

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

}  // namespace

void write_authors_csv(const std::string& path, const std::vector<AuthorRecord>& rows) {
  auto out = open_output(path);
  write_csv_row(out, {"author_id", "display_name", "orcid", "country"});
  for (const auto& r : rows) write_csv_row(out, {r.author_id, r.display_name, r.orcid, r.country});
}

void write_works_jsonl(const std::string& path, const std::vector<WorkRecord>& rows) {
  auto out = open_output(path);
  for (const auto& r : rows) {
    json j;
    j["work_id"] = r.work_id;
    j["doi"] = r.doi;
    j["author_ids"] = r.author_ids;
    j["concepts"] = json::array();
    for (const auto& c : r.concepts) {
      j["concepts"].push_back({{"name", c.concept_name}, {"level", c.level}, {"score", c.score}});
    }
    out << j.dump() << '\n';
  }
}

void write_events_csv(const std::string& path, const std::vector<TweetEvent>& rows) {
  auto out = open_output(path);
  write_csv_row(out, {"tweet_id", "tweeter_id", "doi"});
  for (const auto& r : rows) write_csv_row(out, {r.tweet_id, r.tweeter_id, r.doi});
}

void write_tweeters_csv(const std::string& path, const std::vector<TweeterProfile>& rows) {
  auto out = open_output(path);
  write_csv_row(out, {"tweeter_id", "handle", "profile_name"});
  for (const auto& r : rows) write_csv_row(out, {r.tweeter_id, r.handle, r.profile_name});
}

void write_golden_csv(const std::string& path, const std::vector<GoldenPair>& rows) {
  auto out = open_output(path);
  write_csv_row(out, {"author_id", "tweeter_id"});
  for (const auto& r : rows) write_csv_row(out, {r.author_id, r.tweeter_id});
}

void write_corpus_files(const Corpus& corpus, const CorpusPaths& paths) {
  write_authors_csv(paths.authors, corpus.authors);
  write_works_jsonl(paths.works, corpus.works);
  write_events_csv(paths.events, corpus.events);
  write_tweeters_csv(paths.tweeters, corpus.tweeters);
  write_golden_csv(paths.golden, corpus.golden);
}

}  // namespace scholarmatch
