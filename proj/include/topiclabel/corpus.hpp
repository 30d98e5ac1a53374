#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace topiclabel {

/// One ingested text. `tokens` is always recomputable as tokenize(text).
struct Document {
  std::string id;
  std::string text;
  std::vector<std::string> tokens;
  std::string metadata_json;  // raw JSON of the optional "metadata" object, "" if absent
};

/// Immutable after load_corpus(); safe to share read-only across workers.
struct Corpus {
  std::vector<Document> documents;
  // token -> dense id, assigned in first-appearance order. Tokens whose
  // corpus frequency falls below min_token_freq (or that are stopwords) are
  // absent here but stay in the per-document token streams.
  std::map<std::string, int> vocabulary;
  // token -> number of documents containing it, for every token seen.
  std::map<std::string, int> document_frequency;

  std::size_t size() const { return documents.size(); }
};

struct CorpusOptions {
  int min_token_freq = 1;      // 1 keeps everything
  std::string stopwords_path;  // optional newline-separated list; "" = none
};

/// Lowercases and splits on maximal runs of non-word characters. Word
/// characters are ASCII alphanumerics, underscore, and any byte >= 0x80
/// (multi-byte UTF-8 sequences pass through untouched).
std::vector<std::string> tokenize(const std::string& text);

/// Reads a JSONL file, one {"id","text",["metadata"]} object per line.
/// Throws ConfigError when the file cannot be opened, Error naming the line
/// for malformed JSON, Error naming the id for duplicates.
Corpus load_corpus(const std::string& path, const CorpusOptions& options = {});

/// Same contract, parsing from an already-read buffer. `source_name` feeds
/// error messages.
Corpus parse_corpus(const std::string& jsonl, const CorpusOptions& options = {},
                    const std::string& source_name = "<memory>");

}  // namespace topiclabel
