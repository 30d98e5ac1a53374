#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "topiclabel/backends.hpp"
#include "topiclabel/corpus.hpp"
#include "topiclabel/metrics_coherence.hpp"

namespace topiclabel {

/// Raw spherical k-means output over anonymous vectors; document identity is
/// attached by sweep_topic_counts.
struct ClusterResult {
  int k = 0;
  std::vector<int> assignments;             // index -> topic id in [0,k)
  std::vector<EmbeddingVector> centroids;   // unit norm
  std::vector<double> objective_trace;      // sum of cosines, one entry per iteration
  int iterations = 0;
  bool converged = false;
};

/// One finalized model for one value of k: hard partition, unit centroids,
/// per-topic word lists, and the two selection metrics.
struct TopicModel {
  int k = 0;
  std::map<std::string, int> assignments;              // document id -> topic id
  std::vector<EmbeddingVector> centroids;
  double npmi = 0.0;       // mean topic coherence, in [-1,1]
  double diversity = 0.0;  // fraction in [0,1]
  std::map<int, std::vector<std::string>> top_words;   // topic id -> top-N tokens
};

/// Spherical k-means: inputs normalized to unit length, cosine similarity,
/// centroids renormalized each iteration, k-means++ seeding driven only by
/// `seed`. Runs until assignments are unchanged or 100 iterations. An empty
/// cluster is reseeded to the point farthest (lowest cosine) from its
/// centroid's nearest rival centroid.
/// Throws std::invalid_argument for k <= 0, k > n, or a zero input vector.
ClusterResult cluster(const std::vector<EmbeddingVector>& embeddings, int k,
                      std::uint64_t seed);

struct SweepOptions {
  int window_size = 10;
  int top_words_n = 10;
  int diversity_m = 25;
  // Stats to score NPMI against; defaults to stats built from the clustered
  // corpus itself when null.
  const CooccurrenceStats* reference_stats = nullptr;
  // Collects out-of-vocabulary notes from topic_npmi when set.
  std::vector<std::string>* warnings = nullptr;
};

/// One finalized TopicModel per entry of ks, clustered with the same seed,
/// output in ks order. Word lists use class-based TF-IDF; diversity uses
/// top-M lists with M clamped to the smallest topic vocabulary so every list
/// has equal length on small corpora.
std::vector<TopicModel> sweep_topic_counts(const Corpus& corpus,
                                           const std::vector<EmbeddingVector>& embeddings,
                                           const std::vector<int>& ks, std::uint64_t seed,
                                           const SweepOptions& options = {});

/// The model with maximum npmi; ties broken by smaller k, then by order of
/// appearance. Throws std::invalid_argument on an empty list.
const TopicModel& select_best_model(const std::vector<TopicModel>& models);

}  // namespace topiclabel
