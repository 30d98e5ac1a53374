#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace topiclabel {

using EmbeddingVector = std::vector<double>;

enum class Granularity { document, token };

/// embed_texts output. Document granularity fills `vectors` (one per text);
/// token granularity fills `token_vectors` and `tokens` (one list per text,
/// aligned) so callers can match vectors back to surface tokens.
struct EmbedResult {
  std::vector<EmbeddingVector> vectors;
  std::vector<std::vector<EmbeddingVector>> token_vectors;
  std::vector<std::vector<std::string>> tokens;
};

struct SummarizationRequest {
  std::vector<std::string> documents;  // in corpus order
  int num_beams = 5;
  int max_input_tokens = 4096;  // whitespace-token budget for the joined input
  std::optional<std::string> style_hint;
};

enum class LabelKind { word_list, summary };

/// One candidate topic representation. `source` is the producing backend id,
/// or "word_list" for the top-words rendering. A backend that failed after
/// retries yields text "" with failed=true; the pipeline records it instead
/// of aborting.
struct TopicLabel {
  int topic_id = 0;
  LabelKind kind = LabelKind::summary;
  std::string text;
  std::string source;
  bool failed = false;
};

std::string to_string(LabelKind kind);
LabelKind label_kind_from_string(const std::string& s);

class EmbedBackend {
 public:
  virtual ~EmbedBackend() = default;
  virtual std::string id() const = 0;
  /// One vector per text (document) or one vector per token per text (token).
  /// Throws std::invalid_argument on empty input, BackendError on transport
  /// failure (after retries) or on dimension mismatch within a batch.
  virtual EmbedResult embed_texts(const std::vector<std::string>& texts,
                                  Granularity granularity) = 0;
};

class SummarizerBackend {
 public:
  virtual ~SummarizerBackend() = default;
  virtual std::string id() const = 0;
  /// Returns a non-empty summary. Throws std::invalid_argument on an invalid
  /// request, BackendError on transport failure or an empty backend reply.
  virtual std::string summarize(const SummarizationRequest& request) = 0;
};

inline constexpr char kDefaultSeparator[] = " ||||| ";
inline constexpr int kStubDimension = 32;

/// Deterministic embedding of one text: per-token unit vectors from a
/// counter-based PRNG seeded with FNV-1a of the token, summed and
/// renormalized. Empty text maps to the first basis vector. Pure: identical
/// bytes give identical vectors on every platform.
EmbeddingVector stub_embed(const std::string& text, int dimension);

/// Enforces the whitespace-token budget on a document set: if the
/// separator-joined input exceeds `max_input_tokens`, each document keeps a
/// share of tokens proportional to its length, never fewer than one. Throws
/// std::invalid_argument when the budget cannot hold one token per document.
std::vector<std::string> truncate_documents(const std::vector<std::string>& documents,
                                            int max_input_tokens,
                                            const std::string& separator = kDefaultSeparator);

/// Joins documents with the separator literal (the form whose whitespace
/// tokens are counted against max_input_tokens).
std::string join_documents(const std::vector<std::string>& documents,
                           const std::string& separator = kDefaultSeparator);

class StubEmbedBackend : public EmbedBackend {
 public:
  explicit StubEmbedBackend(int dimension = kStubDimension);
  std::string id() const override { return "stub"; }
  EmbedResult embed_texts(const std::vector<std::string>& texts,
                          Granularity granularity) override;
  int dimension() const { return dimension_; }

 private:
  int dimension_;
};

/// Extractive stand-in for an MDS model: returns the (truncated) document
/// whose stub embedding is nearest the centroid of all document embeddings.
class StubSummarizerBackend : public SummarizerBackend {
 public:
  explicit StubSummarizerBackend(std::string separator = kDefaultSeparator,
                                 int dimension = kStubDimension);
  std::string id() const override { return "stub"; }
  std::string summarize(const SummarizationRequest& request) override;

 private:
  std::string separator_;
  int dimension_;
};

struct RetryPolicy {
  int attempts = 3;
  int initial_backoff_ms = 500;
  double multiplier = 2.0;
};

/// POST {base_url}/embed with {"texts": [...], "granularity": ...}.
class HttpEmbedBackend : public EmbedBackend {
 public:
  HttpEmbedBackend(std::string base_url, RetryPolicy retry = {});
  ~HttpEmbedBackend() override;
  std::string id() const override;
  EmbedResult embed_texts(const std::vector<std::string>& texts,
                          Granularity granularity) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// POST {base_url}/summarize with the request fields; documents are budgeted
/// against max_input_tokens (separator-joined whitespace-token count) and
/// proportionally truncated before transmission.
class HttpSummarizerBackend : public SummarizerBackend {
 public:
  HttpSummarizerBackend(std::string base_url, std::string id = "remote",
                        std::string separator = kDefaultSeparator, RetryPolicy retry = {});
  ~HttpSummarizerBackend() override;
  std::string id() const override;
  std::string summarize(const SummarizationRequest& request) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace topiclabel
