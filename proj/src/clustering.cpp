#include "topiclabel/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "topiclabel/hashing.hpp"
#include "topiclabel/topic_repr.hpp"

namespace topiclabel {

namespace {

constexpr int kMaxIterations = 100;

double dot(const EmbeddingVector& a, const EmbeddingVector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] * b[i];
  return d;
}

std::vector<EmbeddingVector> normalize_all(const std::vector<EmbeddingVector>& embeddings) {
  std::vector<EmbeddingVector> unit;
  unit.reserve(embeddings.size());
  const std::size_t dim = embeddings.front().size();
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    if (embeddings[i].size() != dim) {
      throw std::invalid_argument("cluster: embedding dimension mismatch at index " +
                                  std::to_string(i));
    }
    double norm = std::sqrt(dot(embeddings[i], embeddings[i]));
    if (norm < 1e-12) {
      throw std::invalid_argument("cluster: zero vector at index " + std::to_string(i) +
                                  " cannot be normalized");
    }
    EmbeddingVector v = embeddings[i];
    for (double& x : v) x /= norm;
    unit.push_back(std::move(v));
  }
  return unit;
}

// k-means++ over cosine: seed weights proportional to squared Euclidean
// distance on the unit sphere, which is 2(1 - cos).
std::vector<EmbeddingVector> seed_centroids(const std::vector<EmbeddingVector>& points, int k,
                                            std::uint64_t seed) {
  SplitMix64 rng(seed);
  const std::size_t n = points.size();
  std::set<std::size_t> chosen;
  std::vector<EmbeddingVector> centroids;
  centroids.reserve(k);

  std::size_t first = std::min(n - 1, static_cast<std::size_t>(rng.next_double() * n));
  chosen.insert(first);
  centroids.push_back(points[first]);

  std::vector<double> best_cos(n, -2.0);
  while (static_cast<int>(centroids.size()) < k) {
    for (std::size_t i = 0; i < n; ++i) {
      best_cos[i] = std::max(best_cos[i], dot(points[i], centroids.back()));
    }
    double total = 0.0;
    std::vector<double> weight(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (chosen.count(i)) continue;
      weight[i] = std::max(0.0, 1.0 - best_cos[i]);
      total += weight[i];
    }

    std::size_t pick = n;
    if (total <= 1e-12) {
      // Remaining points coincide with chosen centroids; take the lowest
      // unchosen index.
      for (std::size_t i = 0; i < n; ++i) {
        if (!chosen.count(i)) {
          pick = i;
          break;
        }
      }
    } else {
      const double r = rng.next_double() * total;
      double cum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (weight[i] <= 0.0) continue;
        cum += weight[i];
        if (cum >= r) {
          pick = i;
          break;
        }
        pick = i;  // float dust: fall back to the last weighted index
      }
    }
    chosen.insert(pick);
    centroids.push_back(points[pick]);
  }
  return centroids;
}

// Argmax-cosine assignment. Exact ties keep the current cluster when it is
// among the winners, otherwise take the lowest topic id; stickiness prevents
// oscillation between identical centroids.
std::vector<int> assign_points(const std::vector<EmbeddingVector>& points,
                               const std::vector<EmbeddingVector>& centroids,
                               const std::vector<int>* previous) {
  std::vector<int> assignment(points.size(), 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    int best = 0;
    double best_cos = dot(points[i], centroids[0]);
    for (std::size_t c = 1; c < centroids.size(); ++c) {
      const double cs = dot(points[i], centroids[c]);
      if (cs > best_cos) {
        best_cos = cs;
        best = static_cast<int>(c);
      }
    }
    if (previous) {
      const int prev = (*previous)[i];
      if (prev != best && dot(points[i], centroids[prev]) == best_cos) best = prev;
    }
    assignment[i] = best;
  }
  return assignment;
}

void update_centroids(const std::vector<EmbeddingVector>& points,
                      const std::vector<int>& assignment,
                      std::vector<EmbeddingVector>& centroids) {
  const std::size_t dim = points.front().size();
  std::vector<EmbeddingVector> sums(centroids.size(), EmbeddingVector(dim, 0.0));
  std::vector<int> counts(centroids.size(), 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const int c = assignment[i];
    ++counts[c];
    for (std::size_t d = 0; d < dim; ++d) sums[c][d] += points[i][d];
  }
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    if (counts[c] == 0) continue;  // empty cluster keeps its centroid until reseeded
    double norm = std::sqrt(dot(sums[c], sums[c]));
    if (norm < 1e-12) continue;  // members cancel out; keep the previous direction
    for (double& x : sums[c]) x /= norm;
    centroids[c] = std::move(sums[c]);
  }
}

// Reseeds each empty cluster to the point farthest (lowest cosine) from its
// centroid's nearest rival centroid, stealing only from clusters that keep at
// least one member. Each pass fills one empty cluster, so this terminates.
void fix_empty_clusters(const std::vector<EmbeddingVector>& points,
                        std::vector<EmbeddingVector>& centroids,
                        std::vector<int>& assignment) {
  const int k = static_cast<int>(centroids.size());
  while (true) {
    std::vector<int> counts(k, 0);
    for (int a : assignment) ++counts[a];
    int empty = -1;
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        empty = c;
        break;
      }
    }
    if (empty < 0) return;

    int rival = -1;
    double rival_cos = -2.0;
    for (int c = 0; c < k; ++c) {
      if (c == empty || counts[c] == 0) continue;
      const double cs = dot(centroids[empty], centroids[c]);
      if (cs > rival_cos) {
        rival_cos = cs;
        rival = c;
      }
    }

    std::size_t farthest = points.size();
    double lowest_cos = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (counts[assignment[i]] < 2) continue;  // do not empty a singleton
      const double cs = dot(points[i], centroids[rival]);
      if (cs < lowest_cos) {
        lowest_cos = cs;
        farthest = i;
      }
    }
    centroids[empty] = points[farthest];
    assignment[farthest] = empty;
  }
}

double objective(const std::vector<EmbeddingVector>& points,
                 const std::vector<EmbeddingVector>& centroids,
                 const std::vector<int>& assignment) {
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    total += dot(points[i], centroids[assignment[i]]);
  }
  return total;
}

}  // namespace

ClusterResult cluster(const std::vector<EmbeddingVector>& embeddings, int k, std::uint64_t seed) {
  if (k <= 0) throw std::invalid_argument("cluster: k must be positive");
  if (embeddings.empty()) throw std::invalid_argument("cluster: no embeddings");
  if (k > static_cast<int>(embeddings.size())) {
    throw std::invalid_argument("cluster: k (" + std::to_string(k) + ") exceeds document count (" +
                                std::to_string(embeddings.size()) + ")");
  }

  const auto points = normalize_all(embeddings);

  ClusterResult result;
  result.k = k;
  result.centroids = seed_centroids(points, k, seed);
  result.assignments = assign_points(points, result.centroids, nullptr);
  fix_empty_clusters(points, result.centroids, result.assignments);

  for (int iter = 0; iter < kMaxIterations; ++iter) {
    result.iterations = iter + 1;
    update_centroids(points, result.assignments, result.centroids);
    auto next = assign_points(points, result.centroids, &result.assignments);
    fix_empty_clusters(points, result.centroids, next);
    result.objective_trace.push_back(objective(points, result.centroids, next));
    if (next == result.assignments) {
      result.converged = true;
      break;
    }
    result.assignments = std::move(next);
  }
  return result;
}

std::vector<TopicModel> sweep_topic_counts(const Corpus& corpus,
                                           const std::vector<EmbeddingVector>& embeddings,
                                           const std::vector<int>& ks, std::uint64_t seed,
                                           const SweepOptions& options) {
  if (embeddings.size() != corpus.documents.size()) {
    throw std::invalid_argument("sweep_topic_counts: one embedding per document required");
  }

  CooccurrenceStats own_stats;
  const CooccurrenceStats* stats = options.reference_stats;
  if (!stats) {
    own_stats = build_cooccurrence(corpus, options.window_size);
    stats = &own_stats;
  }

  std::vector<TopicModel> models;
  models.reserve(ks.size());
  for (int k : ks) {
    auto clustered = cluster(embeddings, k, seed);

    TopicModel model;
    model.k = k;
    model.centroids = std::move(clustered.centroids);
    for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
      model.assignments[corpus.documents[i].id] = clustered.assignments[i];
    }

    int smallest_topic_vocab = std::numeric_limits<int>::max();
    std::map<int, std::vector<std::string>> diversity_lists;
    double npmi_sum = 0.0;
    for (int topic = 0; topic < k; ++topic) {
      auto list = top_words(corpus, model.assignments, topic, options.top_words_n);
      model.top_words[topic] = list.words;
      npmi_sum += topic_npmi(*stats, list.words, options.warnings);

      auto wide = top_words(corpus, model.assignments, topic, options.diversity_m);
      smallest_topic_vocab = std::min(smallest_topic_vocab, static_cast<int>(wide.words.size()));
      diversity_lists[topic] = std::move(wide.words);
    }
    model.npmi = npmi_sum / static_cast<double>(k);

    // Clamp M to the smallest topic vocabulary so every list has equal
    // length; tiny corpora cannot always fill 25 slots.
    for (auto& [topic, words] : diversity_lists) {
      words.resize(static_cast<std::size_t>(smallest_topic_vocab));
    }
    model.diversity = diversity(diversity_lists);

    models.push_back(std::move(model));
  }
  return models;
}

const TopicModel& select_best_model(const std::vector<TopicModel>& models) {
  if (models.empty()) throw std::invalid_argument("select_best_model: empty model list");
  const TopicModel* best = &models.front();
  for (const auto& model : models) {
    if (model.npmi > best->npmi || (model.npmi == best->npmi && model.k < best->k)) {
      best = &model;
    }
  }
  return *best;
}

}  // namespace topiclabel
