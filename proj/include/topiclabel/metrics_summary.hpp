#pragma once

#include <map>
#include <string>
#include <vector>

#include "topiclabel/backends.hpp"

namespace topiclabel {

struct ScoreTriple {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Scores for one candidate/reference comparison. F1 is the harmonic mean of
/// its P and R (0 when P+R=0).
struct EvalScores {
  ScoreTriple rouge1;
  ScoreTriple bertscore;
};

/// Unigram overlap with clipped counts over tokenize()d text. Either side
/// empty gives all zeros.
ScoreTriple rouge1(const std::string& candidate, const std::string& reference);

/// Same, with F1 scaled by min(1, |ref|/|cand|) to discount long candidates.
/// Off by default in the pipeline.
ScoreTriple rouge1_length_normalized(const std::string& candidate, const std::string& reference);

/// Greedy maximum-cosine matching of token embeddings: P averages each
/// candidate token's best match against the reference, R the reverse, no IDF
/// weighting and no baseline rescaling. Empty side gives zeros. Embedder
/// failures propagate.
ScoreTriple bertscore(const std::string& candidate, const std::string& reference,
                      EmbedBackend& token_embedder);

/// Greedy matching core on pre-computed token vectors (the oracle-facing
/// entry point; bertscore() embeds and delegates here).
ScoreTriple bertscore_from_vectors(const std::vector<EmbeddingVector>& candidate_tokens,
                                   const std::vector<EmbeddingVector>& reference_tokens);

struct SourceEvaluation {
  std::map<int, EvalScores> per_topic;  // topic id -> scores
  EvalScores aggregate;                 // arithmetic mean over topics, per field
  int rouge1_f1_x100 = 0;               // rounded presentation values
  int bertscore_f1_x100 = 0;
};

struct EvaluationOptions {
  bool length_normalize_rouge = false;
};

/// Scores every label against its topic's reference text and aggregates per
/// source by arithmetic mean over topics. Failed labels score as empty
/// candidates (all zeros). Throws std::invalid_argument naming any topic
/// without a reference.
std::map<std::string, SourceEvaluation> evaluate_labels(
    const std::vector<TopicLabel>& labels, const std::map<int, std::string>& references,
    EmbedBackend& token_embedder, const EvaluationOptions& options = {});

}  // namespace topiclabel
