#include "topiclabel/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "topiclabel/errors.hpp"

namespace topiclabel {

namespace {

// Word characters: ASCII alphanumerics, underscore, and any byte of a
// multi-byte UTF-8 sequence. Lowercasing is ASCII-only so results do not
// depend on locale.
bool is_word_byte(unsigned char c) {
  if (c >= 0x80) return true;
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

std::set<std::string> load_stopwords(const std::string& path) {
  std::set<std::string> words;
  if (path.empty()) return words;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open stopword list: " + path);
  std::string line;
  while (std::getline(in, line)) {
    for (const auto& tok : tokenize(line)) words.insert(tok);
  }
  return words;
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (is_word_byte(c)) {
      if (c >= 'A' && c <= 'Z') c = static_cast<unsigned char>(c - 'A' + 'a');
      current.push_back(static_cast<char>(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Corpus parse_corpus(const std::string& jsonl, const CorpusOptions& options,
                    const std::string& source_name) {
  const auto stopwords = load_stopwords(options.stopwords_path);

  Corpus corpus;
  std::set<std::string> seen_ids;
  std::map<std::string, long long> corpus_frequency;

  std::istringstream in(jsonl);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object() || !obj.contains("id") || !obj["id"].is_string() ||
        !obj.contains("text") || !obj["text"].is_string()) {
      throw Error(source_name + ": malformed JSON document at line " +
                  std::to_string(line_number));
    }

    Document doc;
    doc.id = obj["id"].get<std::string>();
    doc.text = obj["text"].get<std::string>();
    if (obj.contains("metadata") && obj["metadata"].is_object()) {
      doc.metadata_json = obj["metadata"].dump();
    }
    if (!seen_ids.insert(doc.id).second) {
      throw Error(source_name + ": duplicate document id \"" + doc.id + "\" at line " +
                  std::to_string(line_number));
    }
    doc.tokens = tokenize(doc.text);

    std::set<std::string> distinct(doc.tokens.begin(), doc.tokens.end());
    for (const auto& tok : distinct) corpus.document_frequency[tok] += 1;
    for (const auto& tok : doc.tokens) corpus_frequency[tok] += 1;

    corpus.documents.push_back(std::move(doc));
  }

  // Vocabulary ids in first-appearance order; low-frequency tokens and
  // stopwords are excluded here but stay in the token streams.
  int next_id = 0;
  for (const auto& doc : corpus.documents) {
    for (const auto& tok : doc.tokens) {
      if (corpus.vocabulary.count(tok)) continue;
      if (corpus_frequency[tok] < options.min_token_freq) continue;
      if (stopwords.count(tok)) continue;
      corpus.vocabulary.emplace(tok, next_id++);
    }
  }
  return corpus;
}

Corpus load_corpus(const std::string& path, const CorpusOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open corpus file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_corpus(buffer.str(), options, path);
}

}  // namespace topiclabel
