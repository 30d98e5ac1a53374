#include "topiclabel/backends.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "topiclabel/corpus.hpp"
#include "topiclabel/errors.hpp"
#include "topiclabel/hashing.hpp"

namespace topiclabel {

namespace {

std::vector<std::string> whitespace_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

EmbeddingVector token_unit_vector(const std::string& token, int dimension) {
  SplitMix64 rng(fnv1a64(token));
  EmbeddingVector v(dimension);
  double norm_sq = 0.0;
  for (int i = 0; i < dimension; ++i) {
    v[i] = 2.0 * rng.next_double() - 1.0;
    norm_sq += v[i] * v[i];
  }
  double norm = std::sqrt(norm_sq);
  if (norm < 1e-12) {
    EmbeddingVector basis(dimension, 0.0);
    basis[0] = 1.0;
    return basis;
  }
  for (double& x : v) x /= norm;
  return v;
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na < 1e-24 || nb < 1e-24) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

void validate_request(const SummarizationRequest& request) {
  if (request.documents.empty()) {
    throw std::invalid_argument("summarize: documents must be non-empty");
  }
  if (request.num_beams < 1) {
    throw std::invalid_argument("summarize: num_beams must be >= 1");
  }
  if (request.max_input_tokens < 1) {
    throw std::invalid_argument("summarize: max_input_tokens must be >= 1");
  }
}

}  // namespace

std::string to_string(LabelKind kind) {
  return kind == LabelKind::word_list ? "word_list" : "summary";
}

LabelKind label_kind_from_string(const std::string& s) {
  if (s == "word_list") return LabelKind::word_list;
  if (s == "summary") return LabelKind::summary;
  throw std::invalid_argument("unknown label kind: " + s);
}

EmbeddingVector stub_embed(const std::string& text, int dimension) {
  if (dimension < 2) throw std::invalid_argument("stub_embed: dimension must be >= 2");
  const auto tokens = tokenize(text);
  EmbeddingVector basis(dimension, 0.0);
  basis[0] = 1.0;
  if (tokens.empty()) return basis;

  EmbeddingVector sum(dimension, 0.0);
  for (const auto& tok : tokens) {
    const auto v = token_unit_vector(tok, dimension);
    for (int i = 0; i < dimension; ++i) sum[i] += v[i];
  }
  double norm = std::sqrt(std::inner_product(sum.begin(), sum.end(), sum.begin(), 0.0));
  if (norm < 1e-12) return basis;  // antipodal cancellation
  for (double& x : sum) x /= norm;
  return sum;
}

std::string join_documents(const std::vector<std::string>& documents,
                           const std::string& separator) {
  std::string joined;
  for (std::size_t i = 0; i < documents.size(); ++i) {
    if (i) joined += separator;
    joined += documents[i];
  }
  return joined;
}

std::vector<std::string> truncate_documents(const std::vector<std::string>& documents,
                                            int max_input_tokens, const std::string& separator) {
  std::vector<std::vector<std::string>> doc_tokens;
  doc_tokens.reserve(documents.size());
  long long total = 0;
  for (const auto& doc : documents) {
    doc_tokens.push_back(whitespace_tokens(doc));
    total += static_cast<long long>(doc_tokens.back().size());
  }
  const long long m = static_cast<long long>(documents.size());
  const long long overhead =
      m > 1 ? (m - 1) * static_cast<long long>(whitespace_tokens(separator).size()) : 0;
  if (total + overhead <= max_input_tokens) return documents;

  const long long available = max_input_tokens - overhead;
  if (available < m) {
    throw std::invalid_argument(
        "summarize: max_input_tokens too small to keep one token per document (" +
        std::to_string(m) + " documents, budget " + std::to_string(available) + ")");
  }

  // Proportional share with a floor of one token per document; any tokens the
  // floors push over budget come back off the largest quotas first.
  std::vector<long long> quota(documents.size());
  long long assigned = 0;
  for (std::size_t i = 0; i < documents.size(); ++i) {
    const long long len = static_cast<long long>(doc_tokens[i].size());
    quota[i] = std::max<long long>(1, len * available / std::max<long long>(total, 1));
    quota[i] = std::min(quota[i], std::max<long long>(len, 1));
    assigned += quota[i];
  }
  while (assigned > available) {
    std::size_t largest = 0;
    for (std::size_t i = 1; i < quota.size(); ++i) {
      if (quota[i] > quota[largest]) largest = i;
    }
    --quota[largest];
    --assigned;
  }
  // Hand leftover budget to the documents with the most unused tokens.
  while (assigned < available) {
    std::size_t best = quota.size();
    long long best_remaining = 0;
    for (std::size_t i = 0; i < quota.size(); ++i) {
      const long long remaining = static_cast<long long>(doc_tokens[i].size()) - quota[i];
      if (remaining > best_remaining) {
        best_remaining = remaining;
        best = i;
      }
    }
    if (best == quota.size()) break;
    ++quota[best];
    ++assigned;
  }

  std::vector<std::string> truncated;
  truncated.reserve(documents.size());
  for (std::size_t i = 0; i < documents.size(); ++i) {
    const auto& toks = doc_tokens[i];
    if (static_cast<long long>(toks.size()) <= quota[i]) {
      truncated.push_back(documents[i]);
      continue;
    }
    std::string rebuilt;
    for (long long j = 0; j < quota[i]; ++j) {
      if (j) rebuilt += ' ';
      rebuilt += toks[static_cast<std::size_t>(j)];
    }
    truncated.push_back(std::move(rebuilt));
  }
  return truncated;
}

StubEmbedBackend::StubEmbedBackend(int dimension) : dimension_(dimension) {
  if (dimension < 2) throw std::invalid_argument("stub embed backend: dimension must be >= 2");
}

EmbedResult StubEmbedBackend::embed_texts(const std::vector<std::string>& texts,
                                          Granularity granularity) {
  if (texts.empty()) throw std::invalid_argument("embed_texts: texts must be non-empty");
  EmbedResult result;
  if (granularity == Granularity::document) {
    result.vectors.reserve(texts.size());
    for (const auto& text : texts) result.vectors.push_back(stub_embed(text, dimension_));
    return result;
  }
  result.token_vectors.reserve(texts.size());
  result.tokens.reserve(texts.size());
  for (const auto& text : texts) {
    auto toks = tokenize(text);
    std::vector<EmbeddingVector> vecs;
    vecs.reserve(toks.size());
    for (const auto& tok : toks) vecs.push_back(token_unit_vector(tok, dimension_));
    result.token_vectors.push_back(std::move(vecs));
    result.tokens.push_back(std::move(toks));
  }
  return result;
}

StubSummarizerBackend::StubSummarizerBackend(std::string separator, int dimension)
    : separator_(std::move(separator)), dimension_(dimension) {}

std::string StubSummarizerBackend::summarize(const SummarizationRequest& request) {
  validate_request(request);
  const auto docs = truncate_documents(request.documents, request.max_input_tokens, separator_);

  std::vector<EmbeddingVector> embeddings;
  embeddings.reserve(docs.size());
  for (const auto& doc : docs) embeddings.push_back(stub_embed(doc, dimension_));

  EmbeddingVector centroid(static_cast<std::size_t>(dimension_), 0.0);
  for (const auto& emb : embeddings) {
    for (int i = 0; i < dimension_; ++i) centroid[i] += emb[i];
  }
  for (double& x : centroid) x /= static_cast<double>(docs.size());

  std::size_t best = 0;
  double best_cos = -2.0;
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    const double c = cosine(embeddings[i], centroid);
    if (c > best_cos) {
      best_cos = c;
      best = i;
    }
  }
  const std::string& summary = docs[best];
  if (summary.empty()) throw BackendError("stub: empty summary");
  return summary;
}

}  // namespace topiclabel
