#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cctype>
#include <fstream>
#include <set>

#include "topiclabel/corpus.hpp"
#include "topiclabel/errors.hpp"

using namespace topiclabel;

namespace {

std::string fixture_path() { return std::string(TL_TEST_DATA_DIR) + "/fixture_6docs.jsonl"; }

// Independent tokenizer for oracle checks: scans with a state machine over
// classified characters instead of the library's run splitter.
std::vector<std::string> oracle_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    bool word = std::isalnum(c) || c == '_' || c >= 0x80;
    if (!word) {
      ++i;
      continue;
    }
    std::string tok;
    while (i < text.size()) {
      c = static_cast<unsigned char>(text[i]);
      if (!(std::isalnum(c) || c == '_' || c >= 0x80)) break;
      tok.push_back(static_cast<char>(std::tolower(c)));
      ++i;
    }
    out.push_back(tok);
  }
  return out;
}

std::string write_temp_jsonl(const std::string& name, const std::string& content) {
  const std::string path = "corpus_test_" + name + ".jsonl";
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("tokenize splits on non-word runs and lowercases") {
  CHECK(tokenize("NPMI and Topic Coherence") ==
        std::vector<std::string>{"npmi", "and", "topic", "coherence"});
  CHECK(tokenize("").empty());
  // Underscore is a word character, so tokens like log_p survive intact.
  CHECK(tokenize("log_p ranking, correspond.") ==
        std::vector<std::string>{"log_p", "ranking", "correspond"});
  CHECK(tokenize("a--b  c!!") == std::vector<std::string>{"a", "b", "c"});
  CHECK(tokenize("x1y2 3z") == std::vector<std::string>{"x1y2", "3z"});
}

TEST_CASE("tokenize keeps multi-byte UTF-8 sequences inside tokens") {
  CHECK(tokenize("caf\xc3\xa9 bar") == std::vector<std::string>{"caf\xc3\xa9", "bar"});
}

TEST_CASE("load_corpus ingests the fixture in file order") {
  const Corpus corpus = load_corpus(fixture_path());
  REQUIRE(corpus.documents.size() == 6);
  CHECK(corpus.documents[0].id == "c1");
  CHECK(corpus.documents[1].id == "c2");
  CHECK(corpus.documents[5].id == "c6");
  CHECK(corpus.documents[0].metadata_json.find("fixture") != std::string::npos);
  CHECK(corpus.documents[1].metadata_json.empty());

  // Stored tokens are exactly tokenize(text), and match the oracle scanner.
  for (const auto& doc : corpus.documents) {
    CHECK(doc.tokens == tokenize(doc.text));
    CHECK(doc.tokens == oracle_tokens(doc.text));
  }
}

TEST_CASE("fixture vocabulary size equals the oracle distinct-token count") {
  const Corpus corpus = load_corpus(fixture_path());
  std::set<std::string> distinct;
  for (const auto& doc : corpus.documents) {
    const auto toks = oracle_tokens(doc.text);
    distinct.insert(toks.begin(), toks.end());
  }
  CHECK(corpus.vocabulary.size() == distinct.size());
  // Every stream token is in the vocabulary at default settings.
  for (const auto& doc : corpus.documents) {
    for (const auto& tok : doc.tokens) CHECK(corpus.vocabulary.count(tok) == 1);
  }
}

TEST_CASE("document_frequency bounds") {
  const Corpus corpus = load_corpus(fixture_path());
  const int n = static_cast<int>(corpus.documents.size());
  long long df_sum = 0;
  for (const auto& [tok, df] : corpus.document_frequency) {
    CHECK(df >= 1);
    CHECK(df <= n);
    df_sum += df;
  }
  CHECK(df_sum >= static_cast<long long>(corpus.vocabulary.size()));
  CHECK(corpus.document_frequency.at("npmi") == 3);
  CHECK(corpus.document_frequency.at("perplexity") == 2);
}

TEST_CASE("load_corpus is deterministic") {
  const Corpus a = load_corpus(fixture_path());
  const Corpus b = load_corpus(fixture_path());
  REQUIRE(a.documents.size() == b.documents.size());
  for (std::size_t i = 0; i < a.documents.size(); ++i) {
    CHECK(a.documents[i].id == b.documents[i].id);
    CHECK(a.documents[i].tokens == b.documents[i].tokens);
  }
  CHECK(a.vocabulary == b.vocabulary);
  CHECK(a.document_frequency == b.document_frequency);
}

TEST_CASE("duplicate ids are rejected by name") {
  const auto path = write_temp_jsonl(
      "dup", "{\"id\": \"a\", \"text\": \"one\"}\n{\"id\": \"a\", \"text\": \"two\"}\n");
  CHECK_THROWS_WITH_AS(load_corpus(path), doctest::Contains("\"a\""), Error);
}

TEST_CASE("malformed lines are rejected by line number") {
  const auto path =
      write_temp_jsonl("bad", "{\"id\": \"a\", \"text\": \"one\"}\nnot json at all\n");
  CHECK_THROWS_WITH_AS(load_corpus(path), doctest::Contains("line 2"), Error);

  const auto missing = write_temp_jsonl("missing_field", "{\"id\": \"a\"}\n");
  CHECK_THROWS_WITH_AS(load_corpus(missing), doctest::Contains("line 1"), Error);
}

TEST_CASE("missing file is a config error") {
  CHECK_THROWS_AS(load_corpus("no_such_file.jsonl"), ConfigError);
}

TEST_CASE("two-line file ingests in order") {
  const auto path = write_temp_jsonl(
      "two", "{\"id\": \"a\", \"text\": \"alpha\"}\n{\"id\": \"b\", \"text\": \"beta\"}\n");
  const Corpus corpus = load_corpus(path);
  REQUIRE(corpus.documents.size() == 2);
  CHECK(corpus.documents[0].id == "a");
  CHECK(corpus.documents[1].id == "b");
}

TEST_CASE("min_token_freq prunes the vocabulary but not the streams") {
  const auto path = write_temp_jsonl(
      "freq", "{\"id\": \"a\", \"text\": \"common common rare\"}\n"
              "{\"id\": \"b\", \"text\": \"common other\"}\n");
  CorpusOptions options;
  options.min_token_freq = 2;
  const Corpus corpus = load_corpus(path, options);
  CHECK(corpus.vocabulary.count("common") == 1);
  CHECK(corpus.vocabulary.count("rare") == 0);
  CHECK(corpus.vocabulary.count("other") == 0);
  CHECK(corpus.documents[0].tokens == std::vector<std::string>{"common", "common", "rare"});
}

TEST_CASE("stopword list prunes the vocabulary but not the streams") {
  const auto corpus_path = write_temp_jsonl(
      "stop", "{\"id\": \"a\", \"text\": \"the topic of the model\"}\n");
  const std::string stopwords = "corpus_test_stopwords.txt";
  {
    std::ofstream out(stopwords);
    out << "the\nof\n";
  }
  CorpusOptions options;
  options.stopwords_path = stopwords;
  const Corpus corpus = load_corpus(corpus_path, options);
  CHECK(corpus.vocabulary.count("the") == 0);
  CHECK(corpus.vocabulary.count("of") == 0);
  CHECK(corpus.vocabulary.count("topic") == 1);
  CHECK(corpus.documents[0].tokens.size() == 5);
}

TEST_CASE("empty file yields an empty corpus") {
  const auto path = write_temp_jsonl("empty", "");
  const Corpus corpus = load_corpus(path);
  CHECK(corpus.documents.empty());
  CHECK(corpus.vocabulary.empty());
}
