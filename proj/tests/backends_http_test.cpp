#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <sstream>
#include <string>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "topiclabel/backends.hpp"
#include "topiclabel/errors.hpp"

using namespace topiclabel;
using nlohmann::json;

namespace {

// In-process backend double. Handlers run on the server thread.
class MockServer {
 public:
  MockServer() {
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockServer() {
    server_.stop();
    thread_.join();
  }

  httplib::Server& server() { return server_; }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

RetryPolicy fast_retry() { return RetryPolicy{3, 1, 2.0}; }

}  // namespace

TEST_CASE("http embed backend round-trips document vectors") {
  MockServer mock;
  std::string seen_granularity;
  mock.server().Post("/embed", [&](const httplib::Request& req, httplib::Response& res) {
    const auto body = json::parse(req.body);
    seen_granularity = body.at("granularity");
    json vectors = json::array();
    for (std::size_t i = 0; i < body.at("texts").size(); ++i) {
      vectors.push_back({1.0 * (i + 1), 0.5});
    }
    res.set_content(json{{"vectors", vectors}}.dump(), "application/json");
  });

  HttpEmbedBackend backend(mock.url(), fast_retry());
  const auto result = backend.embed_texts({"one", "two"}, Granularity::document);
  CHECK(seen_granularity == "document");
  REQUIRE(result.vectors.size() == 2);
  CHECK(result.vectors[0] == EmbeddingVector{1.0, 0.5});
  CHECK(result.vectors[1] == EmbeddingVector{2.0, 0.5});
}

TEST_CASE("http embed backend parses token granularity with aligned tokens") {
  MockServer mock;
  mock.server().Post("/embed", [&](const httplib::Request& req, httplib::Response& res) {
    const auto body = json::parse(req.body);
    CHECK(body.at("granularity") == "token");
    json response{{"vectors", json::array({json::array({{1.0, 0.0}, {0.0, 1.0}})})},
                  {"tokens", json::array({json::array({"hello", "world"})})}};
    res.set_content(response.dump(), "application/json");
  });

  HttpEmbedBackend backend(mock.url(), fast_retry());
  const auto result = backend.embed_texts({"hello world"}, Granularity::token);
  REQUIRE(result.token_vectors.size() == 1);
  REQUIRE(result.token_vectors[0].size() == 2);
  CHECK(result.tokens[0] == std::vector<std::string>{"hello", "world"});
}

TEST_CASE("dimension mismatch within a batch is fatal") {
  MockServer mock;
  mock.server().Post("/embed", [&](const httplib::Request&, httplib::Response& res) {
    res.set_content(json{{"vectors", {{1.0, 0.0}, {1.0, 0.0, 0.0}}}}.dump(), "application/json");
  });

  HttpEmbedBackend backend(mock.url(), fast_retry());
  CHECK_THROWS_WITH_AS(backend.embed_texts({"a", "b"}, Granularity::document),
                       doctest::Contains("dimension mismatch"), BackendError);
}

TEST_CASE("transport failures are retried and carry the attempt count") {
  // Nothing listens on this port.
  HttpEmbedBackend backend("http://127.0.0.1:1", fast_retry());
  try {
    backend.embed_texts({"a"}, Granularity::document);
    FAIL("expected BackendError");
  } catch (const BackendError& e) {
    CHECK(e.attempts() == 3);
    CHECK(e.retryable());
  }
}

TEST_CASE("5xx responses are retried until the backend recovers") {
  MockServer mock;
  std::atomic<int> calls{0};
  mock.server().Post("/embed", [&](const httplib::Request&, httplib::Response& res) {
    if (++calls < 3) {
      res.status = 503;
      return;
    }
    res.set_content(json{{"vectors", {{1.0, 2.0}}}}.dump(), "application/json");
  });

  HttpEmbedBackend backend(mock.url(), fast_retry());
  const auto result = backend.embed_texts({"a"}, Granularity::document);
  CHECK(calls == 3);
  CHECK(result.vectors[0] == EmbeddingVector{1.0, 2.0});
}

TEST_CASE("4xx responses fail immediately without retry") {
  MockServer mock;
  std::atomic<int> calls{0};
  mock.server().Post("/embed", [&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    res.status = 400;
  });

  HttpEmbedBackend backend(mock.url(), fast_retry());
  try {
    backend.embed_texts({"a"}, Granularity::document);
    FAIL("expected BackendError");
  } catch (const BackendError& e) {
    CHECK_FALSE(e.retryable());
  }
  CHECK(calls == 1);
}

TEST_CASE("requests carry a correlation id") {
  MockServer mock;
  std::string correlation;
  mock.server().Post("/embed", [&](const httplib::Request& req, httplib::Response& res) {
    correlation = req.get_header_value("X-Correlation-Id");
    res.set_content(json{{"vectors", {{1.0}}}}.dump(), "application/json");
  });
  HttpEmbedBackend backend(mock.url(), fast_retry());
  backend.embed_texts({"a"}, Granularity::document);
  CHECK(correlation.rfind("tl-", 0) == 0);
}

TEST_CASE("http summarizer posts the wire schema and truncates to budget") {
  MockServer mock;
  json seen;
  mock.server().Post("/summarize", [&](const httplib::Request& req, httplib::Response& res) {
    seen = json::parse(req.body);
    res.set_content(json{{"summary", "a fine summary"}}.dump(), "application/json");
  });

  HttpSummarizerBackend backend(mock.url(), "ms2", kDefaultSeparator, fast_retry());
  SummarizationRequest request;
  request.documents = {"w1 w2 w3 w4 w5 w6 w7 w8", "v1 v2"};
  request.num_beams = 5;
  request.max_input_tokens = 6;
  CHECK(backend.summarize(request) == "a fine summary");
  CHECK(backend.id() == "ms2");

  REQUIRE(seen.contains("documents"));
  CHECK(seen.at("num_beams") == 5);
  CHECK(seen.at("max_input_tokens") == 6);
  CHECK(seen.at("style_hint").is_null());
  // Truncated: 8+2 tokens plus separator exceeds 6.
  const auto docs = seen.at("documents").get<std::vector<std::string>>();
  REQUIRE(docs.size() == 2);
  CHECK(docs[0].rfind("w1", 0) == 0);
  long long tokens = 0;
  for (const auto& d : docs) {
    std::istringstream in(d);
    std::string tok;
    while (in >> tok) ++tokens;
  }
  CHECK(tokens + 1 <= 6);
}

TEST_CASE("an empty summary from the backend is an error") {
  MockServer mock;
  mock.server().Post("/summarize", [&](const httplib::Request&, httplib::Response& res) {
    res.set_content(json{{"summary", ""}}.dump(), "application/json");
  });
  HttpSummarizerBackend backend(mock.url(), "remote", kDefaultSeparator, fast_retry());
  SummarizationRequest request;
  request.documents = {"x"};
  CHECK_THROWS_WITH_AS(backend.summarize(request), doctest::Contains("empty summary"),
                       BackendError);
}

TEST_CASE("malformed embed responses are backend errors") {
  MockServer mock;
  mock.server().Post("/embed", [&](const httplib::Request&, httplib::Response& res) {
    res.set_content("not json", "application/json");
  });
  HttpEmbedBackend backend(mock.url(), fast_retry());
  CHECK_THROWS_AS(backend.embed_texts({"a"}, Granularity::document), BackendError);
}
