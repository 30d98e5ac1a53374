#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "topiclabel/backends.hpp"
#include "topiclabel/errors.hpp"

namespace topiclabel {

namespace {

std::atomic<std::uint64_t> g_correlation_counter{0};

struct HttpResponse {
  int status = 0;
  std::string body;
};

// POSTs with the configured retry policy. Connection failures and 5xx
// responses are retried with exponential backoff; 4xx responses are final.
HttpResponse post_with_retry(const std::string& base_url, const std::string& path,
                             const std::string& body, const RetryPolicy& retry,
                             const std::string& what) {
  const std::string correlation_id =
      "tl-" + std::to_string(g_correlation_counter.fetch_add(1) + 1);
  int backoff_ms = retry.initial_backoff_ms;
  std::string last_failure;
  for (int attempt = 1; attempt <= retry.attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
      backoff_ms = static_cast<int>(backoff_ms * retry.multiplier);
    }
    httplib::Client client(base_url);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(120, 0);
    httplib::Headers headers{{"X-Correlation-Id", correlation_id}};
    auto result = client.Post(path, headers, body, "application/json");
    if (!result) {
      last_failure = "transport failure (" + httplib::to_string(result.error()) + ")";
      continue;
    }
    if (result->status >= 500) {
      last_failure = "server error " + std::to_string(result->status);
      continue;
    }
    if (result->status != 200) {
      throw BackendError(what + ": backend returned status " + std::to_string(result->status) +
                             " [" + correlation_id + "]",
                         attempt, /*retryable=*/false);
    }
    return {result->status, result->body};
  }
  throw BackendError(what + ": " + last_failure + " after " + std::to_string(retry.attempts) +
                         " attempts [" + correlation_id + "]",
                     retry.attempts, /*retryable=*/true);
}

nlohmann::json parse_body(const std::string& body, const std::string& what) {
  auto parsed = nlohmann::json::parse(body, nullptr, false);
  if (parsed.is_discarded()) throw BackendError(what + ": response is not valid JSON");
  return parsed;
}

EmbeddingVector parse_vector(const nlohmann::json& node, const std::string& what) {
  if (!node.is_array()) throw BackendError(what + ": vector entry is not an array");
  EmbeddingVector v;
  v.reserve(node.size());
  for (const auto& x : node) {
    if (!x.is_number()) throw BackendError(what + ": non-numeric vector component");
    const double value = x.get<double>();
    if (!std::isfinite(value)) throw BackendError(what + ": non-finite vector component");
    v.push_back(value);
  }
  return v;
}

void check_dimension(std::size_t& dim, const EmbeddingVector& v, const std::string& what) {
  if (dim == 0) {
    dim = v.size();
    if (dim == 0) throw BackendError(what + ": empty embedding vector");
  } else if (v.size() != dim) {
    throw BackendError(what + ": dimension mismatch across batch (" + std::to_string(v.size()) +
                       " vs " + std::to_string(dim) + ")");
  }
}

}  // namespace

struct HttpEmbedBackend::Impl {
  std::string base_url;
  RetryPolicy retry;
};

HttpEmbedBackend::HttpEmbedBackend(std::string base_url, RetryPolicy retry)
    : impl_(new Impl{std::move(base_url), retry}) {}

HttpEmbedBackend::~HttpEmbedBackend() = default;

std::string HttpEmbedBackend::id() const { return "http:" + impl_->base_url; }

EmbedResult HttpEmbedBackend::embed_texts(const std::vector<std::string>& texts,
                                          Granularity granularity) {
  if (texts.empty()) throw std::invalid_argument("embed_texts: texts must be non-empty");

  nlohmann::json request{
      {"texts", texts},
      {"granularity", granularity == Granularity::document ? "document" : "token"}};
  const auto response =
      post_with_retry(impl_->base_url, "/embed", request.dump(), impl_->retry, "embed");
  const auto parsed = parse_body(response.body, "embed");
  if (!parsed.contains("vectors") || !parsed["vectors"].is_array() ||
      parsed["vectors"].size() != texts.size()) {
    throw BackendError("embed: response must carry one vectors entry per text");
  }

  EmbedResult result;
  std::size_t dim = 0;
  if (granularity == Granularity::document) {
    for (const auto& node : parsed["vectors"]) {
      auto v = parse_vector(node, "embed");
      check_dimension(dim, v, "embed");
      result.vectors.push_back(std::move(v));
    }
    return result;
  }

  if (!parsed.contains("tokens") || !parsed["tokens"].is_array() ||
      parsed["tokens"].size() != texts.size()) {
    throw BackendError("embed: token granularity response must carry tokens per text");
  }
  for (std::size_t t = 0; t < texts.size(); ++t) {
    const auto& vec_node = parsed["vectors"][t];
    const auto& tok_node = parsed["tokens"][t];
    if (!vec_node.is_array() || !tok_node.is_array() || vec_node.size() != tok_node.size()) {
      throw BackendError("embed: tokens and vectors misaligned for text " + std::to_string(t));
    }
    std::vector<EmbeddingVector> vecs;
    std::vector<std::string> toks;
    for (std::size_t i = 0; i < vec_node.size(); ++i) {
      auto v = parse_vector(vec_node[i], "embed");
      check_dimension(dim, v, "embed");
      vecs.push_back(std::move(v));
      toks.push_back(tok_node[i].get<std::string>());
    }
    result.token_vectors.push_back(std::move(vecs));
    result.tokens.push_back(std::move(toks));
  }
  return result;
}

struct HttpSummarizerBackend::Impl {
  std::string base_url;
  std::string id;
  std::string separator;
  RetryPolicy retry;
};

HttpSummarizerBackend::HttpSummarizerBackend(std::string base_url, std::string id,
                                             std::string separator, RetryPolicy retry)
    : impl_(new Impl{std::move(base_url), std::move(id), std::move(separator), retry}) {}

HttpSummarizerBackend::~HttpSummarizerBackend() = default;

std::string HttpSummarizerBackend::id() const { return impl_->id; }

std::string HttpSummarizerBackend::summarize(const SummarizationRequest& request) {
  if (request.documents.empty()) {
    throw std::invalid_argument("summarize: documents must be non-empty");
  }
  if (request.num_beams < 1) {
    throw std::invalid_argument("summarize: num_beams must be >= 1");
  }
  // The joined form (separator literal between documents) is what counts
  // against the token budget; the wire carries the truncated document list.
  const auto docs =
      truncate_documents(request.documents, request.max_input_tokens, impl_->separator);

  nlohmann::json body{{"documents", docs},
                      {"num_beams", request.num_beams},
                      {"max_input_tokens", request.max_input_tokens},
                      {"style_hint", nullptr}};
  if (request.style_hint) body["style_hint"] = *request.style_hint;

  const auto response =
      post_with_retry(impl_->base_url, "/summarize", body.dump(), impl_->retry, "summarize");
  const auto parsed = parse_body(response.body, "summarize");
  if (!parsed.contains("summary") || !parsed["summary"].is_string()) {
    throw BackendError("summarize: response missing summary field");
  }
  const std::string summary = parsed["summary"].get<std::string>();
  if (summary.empty()) throw BackendError("empty summary");
  return summary;
}

}  // namespace topiclabel
