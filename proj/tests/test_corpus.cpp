#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "scholarmatch/corpus.hpp"
#include "scholarmatch/errors.hpp"
#include "scholarmatch/util.hpp"

using namespace scholarmatch;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("scholarmatch_corpus_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name, const std::string& content) {
    auto p = (path / name).string();
    write_file(p, content);
    return p;
  }
};

CorpusPaths fixture_paths() {
  CorpusPaths p;
  p.authors = std::string(FIXTURE_DIR) + "/authors.csv";
  p.works = std::string(FIXTURE_DIR) + "/works.jsonl";
  p.events = std::string(FIXTURE_DIR) + "/events.csv";
  p.tweeters = std::string(FIXTURE_DIR) + "/tweeters.csv";
  p.golden = std::string(FIXTURE_DIR) + "/golden.csv";
  return p;
}

}  // namespace

TEST_CASE("normalize_doi strips prefixes and lowercases") {
  CHECK(normalize_doi("https://doi.org/10.1000/ABC") == "10.1000/abc");
  CHECK(normalize_doi("10.1000/abc") == "10.1000/abc");
  CHECK(normalize_doi("  doi:10.1000/xyz  ") == "10.1000/xyz");
  CHECK(normalize_doi("http://doi.org/10.5/a") == "10.5/a");
  CHECK(normalize_doi("https://dx.doi.org/10.5/a") == "10.5/a");
  CHECK(normalize_doi("DOI:HTTPS://DOI.ORG/10.1000/AbC") == "10.1000/abc");
  CHECK_THROWS_AS(normalize_doi("example.com/paper"), InvalidDoi);
  CHECK_THROWS_AS(normalize_doi(""), InvalidDoi);
  CHECK_THROWS_AS(normalize_doi("doi:"), InvalidDoi);
  CHECK(!try_normalize_doi("11.1000/abc"));
}

TEST_CASE("normalize_doi is idempotent") {
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    std::string raw = "10.";
    for (int k = 0; k < 4; ++k) raw += static_cast<char>('0' + rng.bounded(10));
    raw += '/';
    for (int k = 0; k < 8; ++k) {
      raw += static_cast<char>(rng.chance(0.5) ? 'A' + rng.bounded(26) : 'a' + rng.bounded(26));
    }
    if (rng.chance(0.5)) raw = "https://doi.org/" + raw;
    auto once = normalize_doi(raw);
    CHECK(normalize_doi(once) == once);
  }
}

TEST_CASE("load_corpus on the shipped sample") {
  LoadReport report;
  Corpus corpus = load_corpus(fixture_paths(), &report);

  CHECK(corpus.authors.size() == 8);
  CHECK(corpus.works.size() == 6);
  CHECK(corpus.events.size() == 14);  // one row has no DOI
  CHECK(corpus.tweeters.size() == 12);
  CHECK(corpus.golden.size() == 4);

  REQUIRE(report.files.size() == 5);
  CHECK(report.files[0].name == "authors");
  CHECK(report.files[0].skipped == 0);
  CHECK(report.files[2].name == "events");
  CHECK(report.files[2].skipped == 1);
  CHECK(report.files[2].skip_reasons.at("invalid_doi") == 1);

  // DOIs come out normalized no matter how the row spelled them.
  bool saw_beta = false;
  for (const auto& e : corpus.events) {
    if (e.tweet_id == "E2") {
      saw_beta = true;
      CHECK(e.doi == "10.1000/beta");
    }
  }
  CHECK(saw_beta);
}

TEST_CASE("loader skips and counts malformed rows") {
  TempDir tmp;
  auto authors = tmp.file("authors.csv",
                          "author_id,display_name,orcid,country\n"
                          "A1,Alice Smith,,US\n"
                          "A2,Bob Jones,,CA\n"
                          "A3,Carol King,,\n");
  auto works = tmp.file("works.jsonl", "");
  auto events = tmp.file("events.csv",
                         "tweet_id,tweeter_id,doi\n"
                         "E1,T1,10.1/a\n"
                         "E2,T2,\n"
                         "E3,T3,10.1/b\n"
                         "E4,T4,10.1/c\n"
                         "E5,T5,10.1/d\n"
                         "E6,T6,10.1/e\n"
                         "E7,T7,10.1/f\n"
                         "E8,T8,10.1/g\n"
                         "E9,T9,10.1/h\n"
                         "E10,T10,10.1/i\n");
  auto tweeters = tmp.file("tweeters.csv", "tweeter_id,handle,profile_name\nT1,@t1,T One\n");
  auto golden = tmp.file("golden.csv", "author_id,tweeter_id\nA1,T1\nA1,T1\n");

  LoadReport report;
  Corpus corpus = load_corpus({authors, works, events, tweeters, golden}, &report);
  CHECK(corpus.authors.size() == 3);
  CHECK(corpus.events.size() == 9);
  // Exactly 10% malformed still loads.
  CHECK(report.files[2].skipped == 1);
  CHECK(report.files[2].rows_read == 10);
  // Duplicate golden pairs collapse to the first.
  CHECK(corpus.golden.size() == 1);
  CHECK(report.files[4].skip_reasons.at("duplicate_pair") == 1);
}

TEST_CASE("duplicate author ids keep the first occurrence") {
  TempDir tmp;
  auto authors = tmp.file("authors.csv",
                          "author_id,display_name,orcid,country\n"
                          "A1,First Wins,,US\n"
                          "A1,Second Loses,,CA\n");
  auto works = tmp.file("works.jsonl", "");
  auto events = tmp.file("events.csv", "tweet_id,tweeter_id,doi\n");
  auto tweeters = tmp.file("tweeters.csv", "tweeter_id,handle,profile_name\n");
  auto golden = tmp.file("golden.csv", "author_id,tweeter_id\n");

  LoadReport report;
  Corpus corpus = load_corpus({authors, works, events, tweeters, golden}, &report);
  REQUIRE(corpus.authors.size() == 1);
  CHECK(corpus.authors[0].display_name == "First Wins");
  CHECK(report.files[0].skip_reasons.at("duplicate_id") == 1);
}

TEST_CASE("loader failure modes") {
  TempDir tmp;
  auto works = tmp.file("works.jsonl", "");
  auto events = tmp.file("events.csv", "tweet_id,tweeter_id,doi\n");
  auto tweeters = tmp.file("tweeters.csv", "tweeter_id,handle,profile_name\n");
  auto golden = tmp.file("golden.csv", "author_id,tweeter_id\n");

  SUBCASE("missing file") {
    CorpusPaths p{(tmp.path / "nope.csv").string(), works, events, tweeters, golden};
    CHECK_THROWS_AS(load_corpus(p, nullptr), FileMissing);
  }
  SUBCASE("header mismatch") {
    auto bad = tmp.file("bad.csv", "id,name\nA1,Alice\n");
    CorpusPaths p{bad, works, events, tweeters, golden};
    CHECK_THROWS_AS(load_corpus(p, nullptr), FormatError);
  }
  SUBCASE("excessive malformed rows") {
    auto bad = tmp.file("dirty.csv",
                        "author_id,display_name,orcid,country\n"
                        "A1,Alice,,US\n"
                        ",missing,,\n"
                        ",missing,,\n");
    CorpusPaths p{bad, works, events, tweeters, golden};
    CHECK_THROWS_AS(load_corpus(p, nullptr), ExcessiveMalformedRows);
  }
  SUBCASE("works rows validate concepts and authors") {
    auto bad = tmp.file("works.jsonl",
                        R"({"work_id":"W1","doi":"10.1/a","author_ids":["A1"],"concepts":[]})"
                        "\n"
                        R"({"work_id":"W2","doi":"10.1/b","author_ids":[]})"
                        "\n"
                        R"({"work_id":"W3","doi":"nope","author_ids":["A1"]})"
                        "\n"
                        R"({"work_id":"W4","doi":"10.1/c","author_ids":["A1"],"concepts":[{"name":"x","level":0,"score":1.5}]})"
                        "\n"
                        R"(not json)"
                        "\n"
                        R"({"work_id":"W5","doi":"10.1/d","author_ids":["A1"]})"
                        "\n"
                        R"({"work_id":"W6","doi":"10.1/e","author_ids":["A2"],"concepts":[{"name":"y","level":1,"score":0.4}]})"
                        "\n"
                        R"({"work_id":"W7","doi":"10.1/f","author_ids":["A3"]})"
                        "\n"
                        R"({"work_id":"W8","doi":"10.1/g","author_ids":["A4"]})"
                        "\n"
                        R"({"work_id":"W9","doi":"10.1/h","author_ids":["A5"]})"
                        "\n");
    // 4 bad rows of 10: empty author list, unusable DOI, out-of-range
    // score, and a non-JSON line. Past the tolerance, so fatal.
    CorpusPaths p{tmp.file("authors.csv", "author_id,display_name,orcid,country\n"), bad, events,
                  tweeters, golden};
    CHECK_THROWS_AS(load_corpus(p, nullptr), ExcessiveMalformedRows);
  }
}

TEST_CASE("build_doi_index unions authors and tweeters per DOI") {
  std::vector<WorkRecord> works;
  works.push_back({"W1", "10.1/d", {"A1", "A2"}, {}});
  works.push_back({"W2", "10.1/d", {"A2", "A3"}, {}});
  works.push_back({"W3", "10.1/z", {"A9"}, {}});
  std::vector<TweetEvent> events;
  events.push_back({"E1", "T1", "10.1/d"});
  events.push_back({"E2", "T1", "10.1/d"});
  events.push_back({"E3", "T2", "10.1/e"});

  DoiIndex index = build_doi_index(works, events);
  CHECK(index.authors_by_doi.at("10.1/d") == std::vector<std::string>{"A1", "A2", "A3"});
  CHECK(index.tweeters_by_doi.at("10.1/d") == std::vector<std::string>{"T1"});
  CHECK(index.tweeters_by_doi.at("10.1/e") == std::vector<std::string>{"T2"});
  CHECK(index.authors_by_doi.count("10.1/e") == 0);
  CHECK(index.tweeters_by_doi.count("10.1/z") == 0);

  DoiIndex empty = build_doi_index({}, {});
  CHECK(empty.authors_by_doi.empty());
  CHECK(empty.tweeters_by_doi.empty());
}

TEST_CASE("doi index matches a brute-force scan on random corpora") {
  Rng rng(99);
  for (int round = 0; round < 50; ++round) {
    std::vector<WorkRecord> works;
    size_t n_works = 1 + rng.bounded(40);
    for (size_t i = 0; i < n_works; ++i) {
      WorkRecord w;
      w.work_id = "W" + std::to_string(i);
      w.doi = "10.1/" + std::to_string(rng.bounded(10));
      size_t n_authors = 1 + rng.bounded(3);
      for (size_t k = 0; k < n_authors; ++k) {
        w.author_ids.push_back("A" + std::to_string(rng.bounded(12)));
      }
      works.push_back(std::move(w));
    }
    DoiIndex index = build_doi_index(works, {});
    for (const auto& [doi, ids] : index.authors_by_doi) {
      std::set<std::string> expected;
      for (const auto& w : works) {
        if (w.doi == doi) expected.insert(w.author_ids.begin(), w.author_ids.end());
      }
      CHECK(ids.size() == expected.size());
      CHECK(std::set<std::string>(ids.begin(), ids.end()) == expected);
    }
  }
}

TEST_CASE("writers round-trip through the loaders") {
  LoadReport report;
  Corpus corpus = load_corpus(fixture_paths(), &report);

  TempDir tmp;
  CorpusPaths out;
  out.authors = (tmp.path / "authors.csv").string();
  out.works = (tmp.path / "works.jsonl").string();
  out.events = (tmp.path / "events.csv").string();
  out.tweeters = (tmp.path / "tweeters.csv").string();
  out.golden = (tmp.path / "golden.csv").string();
  write_corpus_files(corpus, out);

  LoadReport report2;
  Corpus again = load_corpus(out, &report2);
  REQUIRE(again.authors.size() == corpus.authors.size());
  for (size_t i = 0; i < corpus.authors.size(); ++i) {
    CHECK(again.authors[i].author_id == corpus.authors[i].author_id);
    CHECK(again.authors[i].display_name == corpus.authors[i].display_name);
    CHECK(again.authors[i].orcid == corpus.authors[i].orcid);
    CHECK(again.authors[i].country == corpus.authors[i].country);
  }
  REQUIRE(again.works.size() == corpus.works.size());
  for (size_t i = 0; i < corpus.works.size(); ++i) {
    CHECK(again.works[i].work_id == corpus.works[i].work_id);
    CHECK(again.works[i].doi == corpus.works[i].doi);
    CHECK(again.works[i].author_ids == corpus.works[i].author_ids);
    REQUIRE(again.works[i].concepts.size() == corpus.works[i].concepts.size());
    for (size_t k = 0; k < corpus.works[i].concepts.size(); ++k) {
      CHECK(again.works[i].concepts[k].concept_name == corpus.works[i].concepts[k].concept_name);
      CHECK(again.works[i].concepts[k].level == corpus.works[i].concepts[k].level);
      CHECK(again.works[i].concepts[k].score ==
            doctest::Approx(corpus.works[i].concepts[k].score));
    }
  }
  REQUIRE(again.events.size() == corpus.events.size());
  for (size_t i = 0; i < corpus.events.size(); ++i) {
    CHECK(again.events[i].tweet_id == corpus.events[i].tweet_id);
    CHECK(again.events[i].tweeter_id == corpus.events[i].tweeter_id);
    CHECK(again.events[i].doi == corpus.events[i].doi);
  }
  CHECK(again.golden == corpus.golden);
}

TEST_CASE("csv fields with commas, quotes and newlines survive") {
  TempDir tmp;
  auto authors = tmp.file("authors.csv",
                          "author_id,display_name,orcid,country\n"
                          "A1,\"Smith, John \"\"JJ\"\"\",,US\n"
                          "A2,\"Two\nLines\",,\n");
  auto works = tmp.file("works.jsonl", "");
  auto events = tmp.file("events.csv", "tweet_id,tweeter_id,doi\n");
  auto tweeters = tmp.file("tweeters.csv", "tweeter_id,handle,profile_name\n");
  auto golden = tmp.file("golden.csv", "author_id,tweeter_id\n");

  Corpus corpus = load_corpus({authors, works, events, tweeters, golden}, nullptr);
  REQUIRE(corpus.authors.size() == 2);
  CHECK(corpus.authors[0].display_name == "Smith, John \"JJ\"");
  CHECK(corpus.authors[1].display_name == "Two\nLines");
}
