// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exits non-zero if any fail.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "topiclabel.h"
#include "topiclabel/backends.hpp"
#include "topiclabel/clustering.hpp"
#include "topiclabel/corpus.hpp"
#include "topiclabel/hashing.hpp"
#include "topiclabel/metrics_coherence.hpp"
#include "topiclabel/metrics_summary.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace topiclabel;

namespace {

struct Check {
  bool ok = true;
  std::vector<std::string> notes;

  void expect(bool condition, const std::string& message) {
    if (!condition) {
      ok = false;
      notes.push_back(message);
    }
  }
};

std::string fixture_path() { return std::string(TL_TEST_DATA_DIR) + "/fixture_6docs.jsonl"; }

// ---------------------------------------------------------------------------
// Oracles (independent of the library implementations they check).
// ---------------------------------------------------------------------------

ScoreTriple oracle_rouge1(const std::string& candidate, const std::string& reference) {
  const auto cand = tokenize(candidate);
  auto ref = tokenize(reference);
  if (cand.empty() || ref.empty()) return {};
  const double ref_len = static_cast<double>(ref.size());
  long long overlap = 0;
  for (const auto& tok : cand) {
    auto it = std::find(ref.begin(), ref.end(), tok);
    if (it != ref.end()) {
      ref.erase(it);
      ++overlap;
    }
  }
  ScoreTriple s;
  s.precision = static_cast<double>(overlap) / static_cast<double>(cand.size());
  s.recall = static_cast<double>(overlap) / ref_len;
  s.f1 = (s.precision + s.recall) == 0.0 ? 0.0
                                         : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

struct OracleWindows {
  std::vector<std::set<std::string>> windows;

  long long occ(const std::string& t) const {
    long long n = 0;
    for (const auto& w : windows) n += w.count(t) ? 1 : 0;
    return n;
  }
  long long cooc(const std::string& a, const std::string& b) const {
    long long n = 0;
    for (const auto& w : windows) n += (w.count(a) && w.count(b)) ? 1 : 0;
    return n;
  }
  double npmi(const std::string& a, const std::string& b) const {
    const double total = static_cast<double>(windows.size());
    const long long c = cooc(a, b);
    if (c == 0) return -1.0;
    const double p_ab = c / total;
    if (p_ab == 1.0) return 1.0;
    return std::log(p_ab / ((occ(a) / total) * (occ(b) / total))) / -std::log(p_ab);
  }
};

OracleWindows enumerate_windows(const Corpus& corpus, int window_size) {
  OracleWindows oracle;
  for (const auto& doc : corpus.documents) {
    const auto& toks = doc.tokens;
    if (static_cast<int>(toks.size()) <= window_size) {
      oracle.windows.emplace_back(toks.begin(), toks.end());
    } else {
      for (std::size_t start = 0; start + window_size <= toks.size(); ++start) {
        oracle.windows.emplace_back(toks.begin() + start, toks.begin() + start + window_size);
      }
    }
  }
  return oracle;
}

Corpus corpus_from_texts(const std::vector<std::string>& texts) {
  Corpus corpus;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    Document doc;
    doc.id = "d" + std::to_string(i);
    doc.text = texts[i];
    doc.tokens = tokenize(texts[i]);
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

double dot(const EmbeddingVector& a, const EmbeddingVector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] * b[i];
  return d;
}

using Partition = std::set<std::set<int>>;

Partition exhaustive_best_two_partition(const std::vector<EmbeddingVector>& points) {
  const int n = static_cast<int>(points.size());
  Partition best;
  double best_objective = -1e18;
  for (int mask = 1; mask < (1 << n) - 1; ++mask) {
    std::set<int> a, b;
    for (int i = 0; i < n; ++i) (mask & (1 << i) ? a : b).insert(i);
    double objective = 0.0;
    for (const auto& members : {a, b}) {
      EmbeddingVector centroid(points[0].size(), 0.0);
      for (int i : members) {
        for (std::size_t d = 0; d < centroid.size(); ++d) centroid[d] += points[i][d];
      }
      const double norm = std::sqrt(dot(centroid, centroid));
      if (norm < 1e-12) continue;
      for (double& x : centroid) x /= norm;
      for (int i : members) objective += dot(points[i], centroid);
    }
    if (objective > best_objective) {
      best_objective = objective;
      best = Partition{a, b};
    }
  }
  return best;
}

std::vector<EmbeddingVector> random_unit_vectors(SplitMix64& rng, int n, int d) {
  std::vector<EmbeddingVector> points;
  for (int i = 0; i < n; ++i) {
    EmbeddingVector v(d);
    double norm = 0.0;
    do {
      norm = 0.0;
      for (int j = 0; j < d; ++j) {
        v[j] = 2.0 * rng.next_double() - 1.0;
        norm += v[j] * v[j];
      }
    } while (norm < 1e-6);
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    points.push_back(std::move(v));
  }
  return points;
}

// ---------------------------------------------------------------------------
// CLI driving helpers.
// ---------------------------------------------------------------------------

int run_cli(const std::string& args, const fs::path& stdout_file) {
  const std::string cmd =
      std::string(TL_CLI_PATH) + " " + args + " > " + stdout_file.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "";
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string strip_trailing_ws(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) s.pop_back();
  return s;
}

// ---------------------------------------------------------------------------
// Criteria.
// ---------------------------------------------------------------------------

void criterion_selection_fixture(Check& check) {
  const std::vector<std::tuple<double, double, int>> rows{
      {-0.25, 0.97, 10}, {-0.27, 0.97, 20}, {-0.32, 0.96, 25}, {-0.32, 0.97, 15},
      {-0.35, 1.00, 5},  {-0.38, 1.00, 3},  {-0.38, 0.97, 50}};
  std::vector<TopicModel> models;
  for (const auto& [npmi, diversity, k] : rows) {
    TopicModel m;
    m.npmi = npmi;
    m.diversity = diversity;
    m.k = k;
    models.push_back(m);
  }
  const auto& best = select_best_model(models);
  check.expect(best.k == 10, "expected k=10, got k=" + std::to_string(best.k));
}

void criterion_rouge_oracle(Check& check) {
  SplitMix64 rng(20260809);
  auto random_text = [&rng](int max_len, int alphabet) {
    const int len = static_cast<int>(rng.next_double() * (max_len + 1));
    std::string text;
    for (int i = 0; i < len; ++i) {
      if (i) text += ' ';
      text += "tok" + std::to_string(static_cast<int>(rng.next_double() * alphabet));
    }
    return text;
  };
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_text(12, 8);
    const auto b = random_text(12, 8);
    const auto got = rouge1(a, b);
    const auto want = oracle_rouge1(a, b);
    check.expect(std::abs(got.precision - want.precision) <= 1e-9,
                 "precision mismatch on trial " + std::to_string(trial));
    check.expect(std::abs(got.recall - want.recall) <= 1e-9,
                 "recall mismatch on trial " + std::to_string(trial));
    check.expect(std::abs(got.f1 - want.f1) <= 1e-9, "f1 mismatch on trial " + std::to_string(trial));
  }
}

void criterion_npmi_oracle(Check& check) {
  SplitMix64 rng(31415);
  const std::vector<std::string> alphabet{"a", "b", "c", "d", "e", "f"};
  for (int trial = 0; trial < 50; ++trial) {
    const int num_docs = 1 + static_cast<int>(rng.next_double() * 5);
    std::vector<std::string> texts;
    for (int d = 0; d < num_docs; ++d) {
      const int len = 1 + static_cast<int>(rng.next_double() * 30);
      std::string text;
      for (int i = 0; i < len; ++i) {
        if (i) text += ' ';
        text += alphabet[static_cast<std::size_t>(rng.next_double() * alphabet.size())];
      }
      texts.push_back(text);
    }
    const int window = 2 + static_cast<int>(rng.next_double() * 4);

    const auto corpus = corpus_from_texts(texts);
    const auto stats = build_cooccurrence(corpus, window);
    const auto oracle = enumerate_windows(corpus, window);

    auto doubled_texts = texts;
    doubled_texts.insert(doubled_texts.end(), texts.begin(), texts.end());
    const auto doubled_stats = build_cooccurrence(corpus_from_texts(doubled_texts), window);

    std::set<std::string> tokens;
    for (const auto& doc : corpus.documents) tokens.insert(doc.tokens.begin(), doc.tokens.end());
    for (const auto& a : tokens) {
      for (const auto& b : tokens) {
        if (a >= b) continue;
        const double got = npmi_pair(stats, a, b);
        const double want = oracle.npmi(a, b);
        check.expect(std::abs(got - want) <= 1e-9, "npmi mismatch on trial " +
                                                       std::to_string(trial) + " pair " + a + "," + b);
        check.expect(got >= -1.0 && got <= 1.0, "npmi out of [-1,1]");
        check.expect(npmi_pair(doubled_stats, a, b) == got,
                     "duplication changed npmi for pair " + a + "," + b);
      }
    }
  }
}

void criterion_bertscore_hand_cases(Check& check) {
  StubEmbedBackend stub(8);
  const auto identity = bertscore("npmi measures coherence", "npmi measures coherence", stub);
  check.expect(std::abs(identity.f1 - 1.0) <= 1e-9, "identity F1 != 1");

  // Specified embeddings: reference tokens at (1,0) and (0,1); candidate (1,0).
  const std::vector<EmbeddingVector> candidate{{1.0, 0.0}};
  const std::vector<EmbeddingVector> reference{{1.0, 0.0}, {0.0, 1.0}};
  const auto derived = bertscore_from_vectors(candidate, reference);
  check.expect(std::abs(derived.precision - 1.0) <= 1e-9, "derived P != 1");
  check.expect(std::abs(derived.recall - 0.5) <= 1e-9, "derived R != 0.5");
  check.expect(std::abs(derived.f1 - 2.0 / 3.0) <= 1e-9, "derived F1 != 2/3");
}

void criterion_clustering(Check& check) {
  auto unit = [](std::initializer_list<double> values) {
    EmbeddingVector v(values);
    const double n = std::sqrt(dot(v, v));
    for (double& x : v) x /= n;
    return v;
  };
  const std::vector<EmbeddingVector> points{unit({1.0, 0.01, 0.0}), unit({1.0, -0.01, 0.0}),
                                            unit({0.01, 1.0, 0.0}), unit({-0.01, 1.0, 0.0})};
  check.expect(dot(points[0], points[1]) > 0.99, "within-pair cosine too low");
  check.expect(std::abs(dot(points[0], points[2])) < 0.1, "cross-pair cosine too high");

  const auto result = cluster(points, 2, 7);
  std::map<int, std::set<int>> groups;
  for (std::size_t i = 0; i < result.assignments.size(); ++i) {
    groups[result.assignments[i]].insert(static_cast<int>(i));
  }
  Partition got;
  for (auto& [topic, members] : groups) got.insert(members);
  check.expect(got == exhaustive_best_two_partition(points),
               "cluster(k=2) disagrees with exhaustive search");

  SplitMix64 rng(987654321);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_double() * 49);
    const int d = 2 + static_cast<int>(rng.next_double() * 15);
    const int k = 1 + static_cast<int>(rng.next_double() * std::min(n, 10));
    const auto instance = random_unit_vectors(rng, n, d);
    const auto clustered = cluster(instance, k, rng.next_u64());
    for (std::size_t i = 1; i < clustered.objective_trace.size(); ++i) {
      check.expect(clustered.objective_trace[i] >= clustered.objective_trace[i - 1] - 1e-9,
                   "objective decreased on trial " + std::to_string(trial));
    }
  }
}

void criterion_diversity(Check& check) {
  std::vector<std::string> list_a, list_b;
  for (int i = 0; i < 25; ++i) {
    list_a.push_back("a" + std::to_string(i));
    list_b.push_back("b" + std::to_string(i));
  }
  check.expect(diversity({{0, list_a}, {1, list_b}}) == 1.0, "disjoint lists != 1.0");
  check.expect(diversity({{0, list_a}, {1, list_a}}) == 0.5, "identical lists != 0.5");

  SplitMix64 rng(1618);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + static_cast<int>(rng.next_double() * 4);
    const int m = 2 + static_cast<int>(rng.next_double() * 24);
    std::map<int, std::vector<std::string>> lists;
    std::set<std::string> all;
    for (int t = 0; t < k; ++t) {
      std::set<std::string> words;
      while (static_cast<int>(words.size()) < m) {
        words.insert("w" + std::to_string(static_cast<int>(rng.next_double() * 60)));
      }
      lists[t] = {words.begin(), words.end()};
      all.insert(words.begin(), words.end());
    }
    const double expected = static_cast<double>(all.size()) / static_cast<double>(k * m);
    check.expect(diversity(lists) == expected, "diversity != set-union oracle on trial " +
                                                   std::to_string(trial));
  }
}

struct EndToEndContext {
  fs::path work;
  std::string run_dir_a;
};

void criterion_end_to_end(Check& check, EndToEndContext& ctx) {
  ctx.work = fs::temp_directory_path() / ("topiclabel_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(ctx.work);
  fs::create_directories(ctx.work);

  const std::string common_flags =
      "run --corpus " + fixture_path() + " --ks 2 --seed 7 --output-dir ";
  const auto out_a = ctx.work / "cli_a.txt";
  const auto out_b = ctx.work / "cli_b.txt";
  const int rc_a = run_cli(common_flags + (ctx.work / "a").string(), out_a);
  const int rc_b = run_cli(common_flags + (ctx.work / "b").string(), out_b);
  check.expect(rc_a == 0, "first run exited with " + std::to_string(rc_a));
  check.expect(rc_b == 0, "second run exited with " + std::to_string(rc_b));
  if (!check.ok) return;

  const std::string dir_a = strip_trailing_ws(read_file(out_a));
  const std::string dir_b = strip_trailing_ws(read_file(out_b));
  ctx.run_dir_a = dir_a;
  check.expect(fs::exists(fs::path(dir_a) / "artifact.json"), "run A artifact missing");
  check.expect(fs::exists(fs::path(dir_b) / "artifact.json"), "run B artifact missing");
  if (!check.ok) return;

  auto ja = json::parse(read_file(fs::path(dir_a) / "artifact.json"));
  auto jb = json::parse(read_file(fs::path(dir_b) / "artifact.json"));
  ja.erase("created_at");
  ja.erase("finished_at");
  jb.erase("created_at");
  jb.erase("finished_at");
  check.expect(ja.dump() == jb.dump(), "artifacts differ beyond timestamp fields");
  check.expect(read_file(fs::path(dir_a) / "labels.jsonl") ==
                   read_file(fs::path(dir_b) / "labels.jsonl"),
               "labels.jsonl differ between runs");

  // The text report renders the source table with x100-rounded integers.
  const auto report_file = ctx.work / "report.txt";
  const int rc_report = run_cli("report " + dir_a + " --format text", report_file);
  check.expect(rc_report == 0, "report exited with " + std::to_string(rc_report));
  const auto text = read_file(report_file);
  check.expect(text.find("Model") != std::string::npos, "report missing Model header");
  check.expect(text.find("R-1") != std::string::npos, "report missing R-1 column");
  check.expect(text.find("BERTScore") != std::string::npos, "report missing BERTScore column");
  for (const auto& source : {"stub", "word_list"}) {
    const auto& node = ja.at("scores").at(source);
    const int r1 = node.at("rouge1_f1_x100").get<int>();
    const int bs = node.at("bertscore_f1_x100").get<int>();
    std::istringstream lines(text);
    std::string line;
    bool row_found = false;
    while (std::getline(lines, line)) {
      if (line.rfind(source, 0) != 0) continue;
      std::istringstream fields(line.substr(std::string(source).size()));
      int got_r1 = 0, got_bs = 0;
      if (fields >> got_r1 >> got_bs) {
        row_found = got_r1 == r1 && got_bs == bs;
      }
      break;
    }
    check.expect(row_found, std::string("report row for ") + source +
                                " does not carry the x100-rounded integers");
  }
}

void criterion_reevaluation(Check& check, const EndToEndContext& ctx) {
  check.expect(!ctx.run_dir_a.empty(), "no artifact from the end-to-end criterion");
  if (ctx.run_dir_a.empty()) return;

  // Through the C API.
  tl_artifact* artifact = nullptr;
  check.expect(tl_artifact_open(ctx.run_dir_a.c_str(), &artifact) == TL_OK,
               std::string("tl_artifact_open: ") + tl_last_error());
  if (artifact) {
    char* scores = nullptr;
    int matches = 0;
    check.expect(tl_artifact_reevaluate(artifact, &scores, &matches) == TL_OK,
                 std::string("tl_artifact_reevaluate: ") + tl_last_error());
    check.expect(matches == 1, "recomputed scores differ from the stored artifact");
    tl_string_free(scores);
    tl_artifact_free(artifact);
  }

  // Through the CLI surface (exits non-zero on any mismatch).
  const auto out = ctx.work / "evaluate.txt";
  const int rc = run_cli("evaluate " + ctx.run_dir_a, out);
  check.expect(rc == 0, "evaluate exited with " + std::to_string(rc));
}

}  // namespace

int main() {
  ::unsetenv("TOPICLABEL_EMBED_URL");
  ::unsetenv("TOPICLABEL_SUMM_URL");

  struct Criterion {
    std::string name;
    double budget_seconds;
    std::function<void(Check&)> fn;
  };

  EndToEndContext ctx;
  const std::vector<Criterion> criteria{
      {"selection fixture returns the 10-topic model", 1.0, criterion_selection_fixture},
      {"ROUGE-1 matches the brute-force oracle (200 pairs, 1e-9)", 1.0, criterion_rouge_oracle},
      {"NPMI matches window enumeration, bounded, duplication-invariant (50 corpora)", 2.0,
       criterion_npmi_oracle},
      {"BERTScore identity and two-token hand cases", 1.0, criterion_bertscore_hand_cases},
      {"clustering recovers the pair partition; objective non-decreasing (100 runs)", 5.0,
       criterion_clustering},
      {"diversity exact cases and set-union oracle (100 cases)", 1.0, criterion_diversity},
      {"end-to-end run is deterministic modulo timestamps; report shows x100 integers", 5.0,
       [&ctx](Check& check) { criterion_end_to_end(check, ctx); }},
      {"re-evaluating the persisted artifact reproduces its scores exactly", 5.0,
       [&ctx](Check& check) { criterion_reevaluation(check, ctx); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].fn(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("unexpected exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check.expect(elapsed <= criteria[i].budget_seconds,
                 "exceeded runtime budget: " + std::to_string(elapsed) + "s");

    std::printf("[%s] criterion %zu: %s (%.3fs)\n", check.ok ? "PASS" : "FAIL", i + 1,
                criteria[i].name.c_str(), elapsed);
    for (const auto& note : check.notes) std::printf("       - %s\n", note.c_str());
    if (!check.ok) ++failures;
  }

  if (!ctx.work.empty()) fs::remove_all(ctx.work);
  if (failures) {
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
