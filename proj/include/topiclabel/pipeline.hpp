#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "topiclabel/backends.hpp"
#include "topiclabel/clustering.hpp"
#include "topiclabel/metrics_summary.hpp"

namespace topiclabel {

inline constexpr char kPipelineVersion[] = "0.1.0";

struct SummarizerSpec {
  std::string id = "stub";
  std::string url;  // "" selects the stub
};

/// Everything one run needs. Serializes to/from JSON round-trip exactly; the
/// env vars TOPICLABEL_EMBED_URL and TOPICLABEL_SUMM_URL override the URL
/// fields when set.
struct RunConfig {
  std::string corpus_path;
  std::string output_dir = "runs";
  std::string embed_url;  // "" selects the stub
  std::vector<SummarizerSpec> summarizers{{"stub", ""}};
  std::vector<int> ks{3, 5, 10, 15, 20, 25, 50};
  std::uint64_t seed = 7;
  int window_size = 10;
  int top_words_n = 10;
  int diversity_m = 25;
  int num_beams = 5;
  int max_input_tokens = 4096;
  int min_token_freq = 1;
  std::string stopwords_path;
  std::string reference_corpus_path;
  std::string separator = kDefaultSeparator;
  bool length_normalize_rouge = false;

  static RunConfig from_json_text(const std::string& json_text, bool apply_env = true);
  std::string to_json_text() const;
  /// FNV-1a of the canonical JSON, as 16 hex chars.
  std::string config_hash() const;
  /// Throws ConfigError on any field outside its operation's preconditions.
  void validate() const;
};

struct SweepRow {
  int k = 0;
  double npmi = 0.0;
  double diversity = 0.0;
};

struct TopicRecord {
  int topic_id = 0;
  std::vector<std::string> document_ids;  // corpus order
  std::vector<std::string> top_words;
  std::vector<double> top_word_scores;
  std::string reference;  // member texts joined by single spaces, corpus order
};

/// Self-contained result of one run: re-running evaluation from the artifact
/// alone reproduces its scores exactly. Persisted as artifact.json plus
/// labels.jsonl in a directory named by timestamp and config hash.
struct RunArtifact {
  std::string pipeline_version = kPipelineVersion;
  std::string created_at;   // timestamps are the only non-deterministic fields
  std::string finished_at;
  RunConfig config;
  std::size_t num_documents = 0;
  std::size_t vocabulary_size = 0;
  std::vector<std::string> stage_order;
  std::optional<std::string> failed_at;
  std::string failure_reason;
  std::vector<SweepRow> sweep;
  int selected_k = 0;
  std::vector<TopicRecord> topics;
  std::vector<TopicLabel> labels;  // persisted separately as labels.jsonl
  std::map<std::string, SourceEvaluation> scores;
  std::vector<std::string> source_order;  // summarizers in config order, then word_list
  std::string directory;  // where it was saved/loaded from; not serialized
};

/// Runs ingest, embed, sweep, select, represent, label, evaluate, persist in
/// that order and writes the artifact directory. On a stage failure a partial
/// artifact is persisted with failed_at set, then StageError is rethrown.
/// With stub backends and a fixed seed the artifact is byte-identical across
/// runs except for the timestamp fields.
RunArtifact run_pipeline(const RunConfig& config);

/// Directory the artifact was written to (set by run_pipeline/save_artifact).
std::string artifact_directory(const RunArtifact& artifact);

RunArtifact load_artifact(const std::string& dir_or_json_path);
std::string save_artifact(RunArtifact& artifact, const std::string& output_dir);

enum class ReportFormat { text_table, json };

/// text_table renders two tables: sources x (R-1, BERTScore) with x100
/// rounded integers, and the sweep ordered by npmi descending. json emits
/// the raw values. Throws Error naming failed_at on an incomplete artifact.
std::string report(const RunArtifact& artifact, ReportFormat format);

/// Recomputes every EvalScores from the persisted labels and references using
/// the config snapshot's backends. Pure: equals the stored scores exactly.
std::map<std::string, SourceEvaluation> reevaluate(const RunArtifact& artifact);

/// JSON text of a scores map (the artifact's "scores" object).
std::string scores_to_json_text(const std::map<std::string, SourceEvaluation>& scores,
                                const std::vector<std::string>& source_order);

/// Stats for the `ingest` subcommand: document count, vocabulary size, token
/// totals, as JSON.
std::string ingest_stats(const RunConfig& config);

/// Sweep table plus selected k for the `sweep` subcommand, as JSON.
std::string sweep_only(const RunConfig& config);

}  // namespace topiclabel
