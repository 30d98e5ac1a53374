#include "topiclabel/metrics_summary.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "topiclabel/corpus.hpp"

namespace topiclabel {

namespace {

double harmonic_mean(double p, double r) {
  const double s = p + r;
  if (s == 0.0) return 0.0;
  return 2.0 * p * r / s;
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

int round_x100(double value) { return static_cast<int>(std::llround(value * 100.0)); }

}  // namespace

ScoreTriple rouge1(const std::string& candidate, const std::string& reference) {
  const auto cand = tokenize(candidate);
  const auto ref = tokenize(reference);
  if (cand.empty() || ref.empty()) return {};

  std::map<std::string, long long> cand_counts, ref_counts;
  for (const auto& t : cand) ++cand_counts[t];
  for (const auto& t : ref) ++ref_counts[t];

  long long overlap = 0;
  for (const auto& [tok, count] : cand_counts) {
    auto it = ref_counts.find(tok);
    if (it != ref_counts.end()) overlap += std::min(count, it->second);
  }

  ScoreTriple s;
  s.precision = static_cast<double>(overlap) / static_cast<double>(cand.size());
  s.recall = static_cast<double>(overlap) / static_cast<double>(ref.size());
  s.f1 = harmonic_mean(s.precision, s.recall);
  return s;
}

ScoreTriple rouge1_length_normalized(const std::string& candidate, const std::string& reference) {
  ScoreTriple s = rouge1(candidate, reference);
  const auto cand_len = tokenize(candidate).size();
  const auto ref_len = tokenize(reference).size();
  if (cand_len > 0 && ref_len > 0 && cand_len > ref_len) {
    s.f1 *= static_cast<double>(ref_len) / static_cast<double>(cand_len);
  }
  return s;
}

ScoreTriple bertscore_from_vectors(const std::vector<EmbeddingVector>& candidate_tokens,
                                   const std::vector<EmbeddingVector>& reference_tokens) {
  if (candidate_tokens.empty() || reference_tokens.empty()) return {};

  double p_sum = 0.0;
  for (const auto& c : candidate_tokens) {
    double best = -1.0;
    for (const auto& r : reference_tokens) best = std::max(best, cosine(c, r));
    p_sum += best;
  }
  double r_sum = 0.0;
  for (const auto& r : reference_tokens) {
    double best = -1.0;
    for (const auto& c : candidate_tokens) best = std::max(best, cosine(r, c));
    r_sum += best;
  }

  ScoreTriple s;
  s.precision = p_sum / static_cast<double>(candidate_tokens.size());
  s.recall = r_sum / static_cast<double>(reference_tokens.size());
  s.f1 = harmonic_mean(s.precision, s.recall);
  return s;
}

ScoreTriple bertscore(const std::string& candidate, const std::string& reference,
                      EmbedBackend& token_embedder) {
  if (tokenize(candidate).empty() || tokenize(reference).empty()) return {};
  const auto result = token_embedder.embed_texts({candidate, reference}, Granularity::token);
  return bertscore_from_vectors(result.token_vectors[0], result.token_vectors[1]);
}

std::map<std::string, SourceEvaluation> evaluate_labels(
    const std::vector<TopicLabel>& labels, const std::map<int, std::string>& references,
    EmbedBackend& token_embedder, const EvaluationOptions& options) {
  for (const auto& label : labels) {
    if (!references.count(label.topic_id)) {
      throw std::invalid_argument("evaluate_labels: no reference for topic " +
                                  std::to_string(label.topic_id));
    }
  }

  std::map<std::string, SourceEvaluation> by_source;
  for (const auto& label : labels) {
    const auto& reference = references.at(label.topic_id);
    EvalScores scores;
    scores.rouge1 = options.length_normalize_rouge
                        ? rouge1_length_normalized(label.text, reference)
                        : rouge1(label.text, reference);
    scores.bertscore = bertscore(label.text, reference, token_embedder);
    by_source[label.source].per_topic[label.topic_id] = scores;
  }

  for (auto& [source, eval] : by_source) {
    EvalScores agg;
    const double n = static_cast<double>(eval.per_topic.size());
    for (const auto& [topic, s] : eval.per_topic) {
      agg.rouge1.precision += s.rouge1.precision / n;
      agg.rouge1.recall += s.rouge1.recall / n;
      agg.rouge1.f1 += s.rouge1.f1 / n;
      agg.bertscore.precision += s.bertscore.precision / n;
      agg.bertscore.recall += s.bertscore.recall / n;
      agg.bertscore.f1 += s.bertscore.f1 / n;
    }
    eval.aggregate = agg;
    eval.rouge1_f1_x100 = round_x100(agg.rouge1.f1);
    eval.bertscore_f1_x100 = round_x100(agg.bertscore.f1);
  }
  return by_source;
}

}  // namespace topiclabel
