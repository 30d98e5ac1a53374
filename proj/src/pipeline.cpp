#include "topiclabel/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include <set>

#include "topiclabel/errors.hpp"
#include "topiclabel/hashing.hpp"
#include "topiclabel/topic_repr.hpp"

namespace topiclabel {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string> kStageOrder = {"ingest", "embed",    "sweep",   "select",
                                              "represent", "label", "evaluate", "persist"};

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string utc_now_compact() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

json config_to_json(const RunConfig& c) {
  json summarizers = json::array();
  for (const auto& s : c.summarizers) summarizers.push_back({{"id", s.id}, {"url", s.url}});
  return json{{"corpus", c.corpus_path},
              {"output_dir", c.output_dir},
              {"embed_url", c.embed_url},
              {"summarizers", summarizers},
              {"ks", c.ks},
              {"seed", c.seed},
              {"window_size", c.window_size},
              {"top_words_n", c.top_words_n},
              {"diversity_m", c.diversity_m},
              {"num_beams", c.num_beams},
              {"max_input_tokens", c.max_input_tokens},
              {"min_token_freq", c.min_token_freq},
              {"stopwords", c.stopwords_path},
              {"reference_corpus", c.reference_corpus_path},
              {"separator", c.separator},
              {"length_normalize_rouge", c.length_normalize_rouge}};
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "corpus") {
        c.corpus_path = value.get<std::string>();
      } else if (key == "output_dir") {
        c.output_dir = value.get<std::string>();
      } else if (key == "embed_url") {
        c.embed_url = value.get<std::string>();
      } else if (key == "summarizers") {
        c.summarizers.clear();
        for (const auto& s : value) {
          SummarizerSpec spec;
          if (s.is_string()) {
            spec.id = s.get<std::string>();
          } else {
            spec.id = s.at("id").get<std::string>();
            if (s.contains("url")) spec.url = s["url"].get<std::string>();
          }
          c.summarizers.push_back(std::move(spec));
        }
      } else if (key == "ks") {
        c.ks = value.get<std::vector<int>>();
      } else if (key == "seed") {
        c.seed = value.get<std::uint64_t>();
      } else if (key == "window_size") {
        c.window_size = value.get<int>();
      } else if (key == "top_words_n") {
        c.top_words_n = value.get<int>();
      } else if (key == "diversity_m") {
        c.diversity_m = value.get<int>();
      } else if (key == "num_beams") {
        c.num_beams = value.get<int>();
      } else if (key == "max_input_tokens") {
        c.max_input_tokens = value.get<int>();
      } else if (key == "min_token_freq") {
        c.min_token_freq = value.get<int>();
      } else if (key == "stopwords") {
        c.stopwords_path = value.get<std::string>();
      } else if (key == "reference_corpus") {
        c.reference_corpus_path = value.get<std::string>();
      } else if (key == "separator") {
        c.separator = value.get<std::string>();
      } else if (key == "length_normalize_rouge") {
        c.length_normalize_rouge = value.get<bool>();
      } else {
        throw ConfigError("config: unknown field \"" + key + "\"");
      }
    } catch (const json::exception& e) {
      throw ConfigError("config: bad value for \"" + key + "\": " + e.what());
    }
  }
  return c;
}

json score_triple_to_json(const ScoreTriple& s) {
  return json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

ScoreTriple score_triple_from_json(const json& j) {
  return {j.at("precision").get<double>(), j.at("recall").get<double>(), j.at("f1").get<double>()};
}

json eval_scores_to_json(const EvalScores& s) {
  return json{{"rouge1", score_triple_to_json(s.rouge1)},
              {"bertscore", score_triple_to_json(s.bertscore)}};
}

EvalScores eval_scores_from_json(const json& j) {
  return {score_triple_from_json(j.at("rouge1")), score_triple_from_json(j.at("bertscore"))};
}

json scores_to_json(const std::map<std::string, SourceEvaluation>& scores) {
  json out = json::object();
  for (const auto& [source, eval] : scores) {
    json per_topic = json::object();
    for (const auto& [topic, s] : eval.per_topic) {
      per_topic[std::to_string(topic)] = eval_scores_to_json(s);
    }
    out[source] = json{{"per_topic", per_topic},
                       {"aggregate", eval_scores_to_json(eval.aggregate)},
                       {"rouge1_f1_x100", eval.rouge1_f1_x100},
                       {"bertscore_f1_x100", eval.bertscore_f1_x100}};
  }
  return out;
}

std::map<std::string, SourceEvaluation> scores_from_json(const json& j) {
  std::map<std::string, SourceEvaluation> scores;
  for (const auto& [source, node] : j.items()) {
    SourceEvaluation eval;
    for (const auto& [topic, s] : node.at("per_topic").items()) {
      eval.per_topic[std::stoi(topic)] = eval_scores_from_json(s);
    }
    eval.aggregate = eval_scores_from_json(node.at("aggregate"));
    eval.rouge1_f1_x100 = node.at("rouge1_f1_x100").get<int>();
    eval.bertscore_f1_x100 = node.at("bertscore_f1_x100").get<int>();
    scores[source] = std::move(eval);
  }
  return scores;
}

json label_to_json(const TopicLabel& label) {
  return json{{"topic_id", label.topic_id},
              {"kind", to_string(label.kind)},
              {"source", label.source},
              {"text", label.text},
              {"failed", label.failed}};
}

TopicLabel label_from_json(const json& j) {
  TopicLabel label;
  label.topic_id = j.at("topic_id").get<int>();
  label.kind = label_kind_from_string(j.at("kind").get<std::string>());
  label.source = j.at("source").get<std::string>();
  label.text = j.at("text").get<std::string>();
  label.failed = j.value("failed", false);
  return label;
}

json artifact_to_json(const RunArtifact& a) {
  json sweep = json::array();
  for (const auto& row : a.sweep) {
    sweep.push_back({{"k", row.k}, {"npmi", row.npmi}, {"diversity", row.diversity}});
  }
  json topics = json::array();
  for (const auto& t : a.topics) {
    topics.push_back({{"topic_id", t.topic_id},
                      {"document_ids", t.document_ids},
                      {"top_words", t.top_words},
                      {"top_word_scores", t.top_word_scores},
                      {"reference", t.reference}});
  }
  return json{{"pipeline_version", a.pipeline_version},
              {"created_at", a.created_at},
              {"finished_at", a.finished_at},
              {"config", config_to_json(a.config)},
              {"corpus",
               {{"num_documents", a.num_documents}, {"vocabulary_size", a.vocabulary_size}}},
              {"stage_order", a.stage_order},
              {"failed_at", a.failed_at ? json(*a.failed_at) : json(nullptr)},
              {"failure_reason", a.failure_reason},
              {"sweep", sweep},
              {"selected_k", a.selected_k},
              {"topics", topics},
              {"source_order", a.source_order},
              {"scores", scores_to_json(a.scores)},
              {"labels_file", "labels.jsonl"}};
}

RunArtifact artifact_from_json(const json& j) {
  RunArtifact a;
  a.pipeline_version = j.at("pipeline_version").get<std::string>();
  a.created_at = j.at("created_at").get<std::string>();
  a.finished_at = j.at("finished_at").get<std::string>();
  a.config = config_from_json(j.at("config"));
  a.num_documents = j.at("corpus").at("num_documents").get<std::size_t>();
  a.vocabulary_size = j.at("corpus").at("vocabulary_size").get<std::size_t>();
  a.stage_order = j.at("stage_order").get<std::vector<std::string>>();
  if (!j.at("failed_at").is_null()) a.failed_at = j.at("failed_at").get<std::string>();
  a.failure_reason = j.at("failure_reason").get<std::string>();
  for (const auto& row : j.at("sweep")) {
    a.sweep.push_back(
        {row.at("k").get<int>(), row.at("npmi").get<double>(), row.at("diversity").get<double>()});
  }
  a.selected_k = j.at("selected_k").get<int>();
  for (const auto& t : j.at("topics")) {
    TopicRecord record;
    record.topic_id = t.at("topic_id").get<int>();
    record.document_ids = t.at("document_ids").get<std::vector<std::string>>();
    record.top_words = t.at("top_words").get<std::vector<std::string>>();
    record.top_word_scores = t.at("top_word_scores").get<std::vector<double>>();
    record.reference = t.at("reference").get<std::string>();
    a.topics.push_back(std::move(record));
  }
  a.source_order = j.at("source_order").get<std::vector<std::string>>();
  a.scores = scores_from_json(j.at("scores"));
  return a;
}

std::unique_ptr<EmbedBackend> make_embed_backend(const RunConfig& config) {
  if (config.embed_url.empty()) return std::make_unique<StubEmbedBackend>();
  return std::make_unique<HttpEmbedBackend>(config.embed_url);
}

std::vector<std::unique_ptr<SummarizerBackend>> make_summarizers(const RunConfig& config) {
  std::vector<std::unique_ptr<SummarizerBackend>> backends;
  for (const auto& spec : config.summarizers) {
    if (spec.url.empty()) {
      backends.push_back(std::make_unique<StubSummarizerBackend>(config.separator));
    } else {
      backends.push_back(
          std::make_unique<HttpSummarizerBackend>(spec.url, spec.id, config.separator));
    }
  }
  return backends;
}

// Distinguishes exit-code-3 failures (backend) from other stage failures.
// ConfigError passes through untouched: unusable paths are precondition
// violations, not stage outcomes.
template <typename Fn>
void run_stage(const std::string& stage, RunArtifact& artifact, Fn&& fn) {
  try {
    fn();
  } catch (const StageError&) {
    throw;
  } catch (const ConfigError&) {
    throw;
  } catch (const BackendError& e) {
    artifact.failed_at = stage;
    artifact.failure_reason = e.what();
    throw StageError(stage, e.what(), /*backend_cause=*/true);
  } catch (const std::exception& e) {
    artifact.failed_at = stage;
    artifact.failure_reason = e.what();
    throw StageError(stage, e.what());
  }
}

struct PipelineState {
  Corpus corpus;
  Corpus reference_corpus;
  bool has_reference = false;
  std::vector<EmbeddingVector> embeddings;
  std::vector<TopicModel> models;
  const TopicModel* best = nullptr;
};

void run_stages_through_evaluate(const RunConfig& config, RunArtifact& artifact,
                                 PipelineState& state) {
  run_stage("ingest", artifact, [&] {
    CorpusOptions options{config.min_token_freq, config.stopwords_path};
    state.corpus = load_corpus(config.corpus_path, options);
    if (state.corpus.documents.empty()) {
      throw Error("corpus has no documents: " + config.corpus_path);
    }
    artifact.num_documents = state.corpus.documents.size();
    artifact.vocabulary_size = state.corpus.vocabulary.size();
    if (!config.reference_corpus_path.empty()) {
      state.reference_corpus = load_corpus(config.reference_corpus_path, options);
      state.has_reference = true;
    }
  });

  auto embed_backend = make_embed_backend(config);
  run_stage("embed", artifact, [&] {
    std::vector<std::string> texts;
    texts.reserve(state.corpus.documents.size());
    for (const auto& doc : state.corpus.documents) texts.push_back(doc.text);
    state.embeddings = embed_backend->embed_texts(texts, Granularity::document).vectors;
  });

  run_stage("sweep", artifact, [&] {
    CooccurrenceStats reference_stats;
    SweepOptions options;
    options.window_size = config.window_size;
    options.top_words_n = config.top_words_n;
    options.diversity_m = config.diversity_m;
    std::vector<std::string> warnings;
    options.warnings = &warnings;
    if (state.has_reference) {
      reference_stats = build_cooccurrence(state.reference_corpus, config.window_size);
      options.reference_stats = &reference_stats;
    }
    state.models =
        sweep_topic_counts(state.corpus, state.embeddings, config.ks, config.seed, options);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& model : state.models) {
      artifact.sweep.push_back({model.k, model.npmi, model.diversity});
    }
  });

  run_stage("select", artifact, [&] {
    state.best = &select_best_model(state.models);
    artifact.selected_k = state.best->k;
  });

  run_stage("represent", artifact, [&] {
    for (int topic = 0; topic < state.best->k; ++topic) {
      TopicRecord record;
      record.topic_id = topic;
      auto list = top_words(state.corpus, state.best->assignments, topic, config.top_words_n);
      record.top_words = list.words;
      record.top_word_scores = list.scores;
      for (const auto& doc : state.corpus.documents) {
        if (state.best->assignments.at(doc.id) != topic) continue;
        record.document_ids.push_back(doc.id);
        if (!record.reference.empty()) record.reference += ' ';
        record.reference += doc.text;
      }
      artifact.topics.push_back(std::move(record));
    }
  });

  auto summarizers = make_summarizers(config);
  std::vector<SummarizerBackend*> summarizer_ptrs;
  for (const auto& s : summarizers) summarizer_ptrs.push_back(s.get());

  run_stage("label", artifact, [&] {
    // Topics fan out concurrently; results merge in topic-id order.
    std::vector<std::future<std::vector<TopicLabel>>> futures;
    for (const auto& record : artifact.topics) {
      futures.push_back(std::async(std::launch::async, [&, topic = record.topic_id]() {
        const auto& rec = artifact.topics[static_cast<std::size_t>(topic)];
        std::vector<Document> docs;
        for (const auto& doc : state.corpus.documents) {
          if (state.best->assignments.at(doc.id) == topic) docs.push_back(doc);
        }
        LabelParams params;
        params.topic_id = topic;
        params.word_list.topic_id = topic;
        params.word_list.words = rec.top_words;
        params.word_list.scores = rec.top_word_scores;
        params.num_beams = config.num_beams;
        params.max_input_tokens = config.max_input_tokens;
        return label_topic(docs, summarizer_ptrs, params);
      }));
    }
    for (auto& future : futures) {
      for (auto& label : future.get()) artifact.labels.push_back(std::move(label));
    }
  });

  run_stage("evaluate", artifact, [&] {
    std::map<int, std::string> references;
    for (const auto& record : artifact.topics) references[record.topic_id] = record.reference;
    EvaluationOptions options{config.length_normalize_rouge};
    artifact.scores = evaluate_labels(artifact.labels, references, *embed_backend, options);
    for (const auto& spec : config.summarizers) artifact.source_order.push_back(spec.id);
    artifact.source_order.push_back("word_list");
  });
}

std::vector<SweepRow> sorted_sweep(const RunArtifact& artifact) {
  auto rows = artifact.sweep;
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.npmi != b.npmi) return a.npmi > b.npmi;
    return a.k < b.k;
  });
  return rows;
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& json_text, bool apply_env) {
  auto parsed = json::parse(json_text, nullptr, false);
  if (parsed.is_discarded()) throw ConfigError("config: invalid JSON");
  RunConfig config = config_from_json(parsed);
  if (apply_env) {
    if (const char* url = std::getenv("TOPICLABEL_EMBED_URL"); url && *url) {
      config.embed_url = url;
    }
    if (const char* url = std::getenv("TOPICLABEL_SUMM_URL"); url && *url) {
      config.summarizers = {{"remote", url}};
    }
  }
  return config;
}

std::string RunConfig::to_json_text() const { return config_to_json(*this).dump(); }

std::string RunConfig::config_hash() const {
  std::ostringstream out;
  out << std::hex << std::setfill('0') << std::setw(16) << fnv1a64(to_json_text());
  return out.str();
}

void RunConfig::validate() const {
  if (corpus_path.empty()) throw ConfigError("config: corpus path is required");
  if (output_dir.empty()) throw ConfigError("config: output_dir is required");
  if (ks.empty()) throw ConfigError("config: ks must be non-empty");
  for (int k : ks) {
    if (k < 1) throw ConfigError("config: every k must be positive, got " + std::to_string(k));
  }
  if (window_size < 2) throw ConfigError("config: window_size must be >= 2");
  if (top_words_n < 1) throw ConfigError("config: top_words_n must be >= 1");
  if (diversity_m < 1) throw ConfigError("config: diversity_m must be >= 1");
  if (num_beams < 1) throw ConfigError("config: num_beams must be >= 1");
  if (max_input_tokens < 1) throw ConfigError("config: max_input_tokens must be >= 1");
  if (min_token_freq < 1) throw ConfigError("config: min_token_freq must be >= 1");
  if (summarizers.empty()) throw ConfigError("config: at least one summarizer is required");
  std::set<std::string> ids;
  for (const auto& spec : summarizers) {
    if (spec.id.empty()) throw ConfigError("config: summarizer id must be non-empty");
    if (spec.id == "word_list") {
      throw ConfigError("config: summarizer id \"word_list\" is reserved");
    }
    if (!ids.insert(spec.id).second) {
      throw ConfigError("config: duplicate summarizer id \"" + spec.id + "\"");
    }
  }
}

std::string artifact_directory(const RunArtifact& artifact) { return artifact.directory; }

std::string save_artifact(RunArtifact& artifact, const std::string& output_dir) {
  fs::path base(output_dir);
  fs::create_directories(base);
  const std::string stem = "run-" + utc_now_compact() + "-" + artifact.config.config_hash().substr(0, 8);
  fs::path dir = base / stem;
  for (int suffix = 2; fs::exists(dir); ++suffix) {
    dir = base / (stem + "-" + std::to_string(suffix));
  }
  fs::create_directories(dir);

  std::ofstream artifact_out(dir / "artifact.json", std::ios::binary);
  artifact_out << artifact_to_json(artifact).dump(2) << "\n";
  if (!artifact_out) throw Error("failed to write " + (dir / "artifact.json").string());

  std::ofstream labels_out(dir / "labels.jsonl", std::ios::binary);
  for (const auto& label : artifact.labels) labels_out << label_to_json(label).dump() << "\n";
  if (!labels_out) throw Error("failed to write " + (dir / "labels.jsonl").string());

  artifact.directory = dir.string();
  return artifact.directory;
}

RunArtifact load_artifact(const std::string& dir_or_json_path) {
  fs::path path(dir_or_json_path);
  if (fs::is_directory(path)) path /= "artifact.json";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open artifact: " + path.string());
  json parsed;
  try {
    in >> parsed;
  } catch (const json::exception& e) {
    throw Error("artifact " + path.string() + " is not valid JSON: " + e.what());
  }
  RunArtifact artifact = artifact_from_json(parsed);
  artifact.directory = path.parent_path().string();

  const fs::path labels_path = path.parent_path() / "labels.jsonl";
  std::ifstream labels_in(labels_path, std::ios::binary);
  if (labels_in) {
    std::string line;
    while (std::getline(labels_in, line)) {
      if (line.empty()) continue;
      artifact.labels.push_back(label_from_json(json::parse(line)));
    }
  }
  return artifact;
}

RunArtifact run_pipeline(const RunConfig& config) {
  config.validate();

  RunArtifact artifact;
  artifact.config = config;
  artifact.created_at = utc_now();
  artifact.stage_order = kStageOrder;

  PipelineState state;
  try {
    run_stages_through_evaluate(config, artifact, state);
  } catch (const StageError&) {
    // Persist what completed, marked with the failing stage.
    artifact.finished_at = utc_now();
    try {
      save_artifact(artifact, config.output_dir);
    } catch (...) {
      // The partial artifact is best-effort; the stage error wins.
    }
    throw;
  }

  run_stage("persist", artifact, [&] {
    artifact.finished_at = utc_now();
    save_artifact(artifact, config.output_dir);
  });
  return artifact;
}

std::string scores_to_json_text(const std::map<std::string, SourceEvaluation>& scores,
                                const std::vector<std::string>& source_order) {
  json out = scores_to_json(scores);
  out["source_order"] = source_order;
  return out.dump(2);
}

std::map<std::string, SourceEvaluation> reevaluate(const RunArtifact& artifact) {
  if (artifact.failed_at) {
    throw Error("cannot re-evaluate: artifact failed at stage " + *artifact.failed_at);
  }
  std::map<int, std::string> references;
  for (const auto& record : artifact.topics) references[record.topic_id] = record.reference;
  auto embed_backend = make_embed_backend(artifact.config);
  EvaluationOptions options{artifact.config.length_normalize_rouge};
  return evaluate_labels(artifact.labels, references, *embed_backend, options);
}

std::string report(const RunArtifact& artifact, ReportFormat format) {
  if (artifact.failed_at) {
    throw Error("cannot report: artifact failed at stage " + *artifact.failed_at);
  }

  if (format == ReportFormat::json) {
    json sweep = json::array();
    for (const auto& row : sorted_sweep(artifact)) {
      sweep.push_back({{"k", row.k}, {"npmi", row.npmi}, {"diversity", row.diversity}});
    }
    json out{{"pipeline_version", artifact.pipeline_version},
             {"selected_k", artifact.selected_k},
             {"sweep", sweep},
             {"source_order", artifact.source_order},
             {"scores", scores_to_json(artifact.scores)}};
    return out.dump(2);
  }

  std::ostringstream out;
  std::size_t width = std::string("Model").size();
  for (const auto& source : artifact.source_order) width = std::max(width, source.size());

  out << std::left << std::setw(static_cast<int>(width)) << "Model" << "  R-1  BERTScore\n";
  out << std::string(width, '-') << "  ---  ---------\n";
  for (const auto& source : artifact.source_order) {
    auto it = artifact.scores.find(source);
    if (it == artifact.scores.end()) continue;
    out << std::left << std::setw(static_cast<int>(width)) << source << "  " << std::right
        << std::setw(3) << it->second.rouge1_f1_x100 << "  " << std::setw(9)
        << it->second.bertscore_f1_x100 << "\n";
  }

  out << "\ncoherence (NPMI)  diversity  topics\n";
  out << "----------------  ---------  ------\n";
  out << std::fixed << std::setprecision(2);
  for (const auto& row : sorted_sweep(artifact)) {
    std::ostringstream npmi;
    npmi << std::fixed << std::setprecision(2) << row.npmi;
    std::ostringstream div;
    div << std::fixed << std::setprecision(2) << row.diversity;
    out << std::left << std::setw(16) << npmi.str() << "  " << std::setw(9) << div.str() << "  "
        << row.k << (row.k == artifact.selected_k ? "  (selected)" : "") << "\n";
  }
  return out.str();
}

std::string ingest_stats(const RunConfig& config) {
  if (config.corpus_path.empty()) throw ConfigError("config: corpus path is required");
  CorpusOptions options{config.min_token_freq, config.stopwords_path};
  const Corpus corpus = load_corpus(config.corpus_path, options);
  long long total_tokens = 0;
  std::set<std::string> distinct;
  for (const auto& doc : corpus.documents) {
    total_tokens += static_cast<long long>(doc.tokens.size());
    distinct.insert(doc.tokens.begin(), doc.tokens.end());
  }
  json out{{"corpus", config.corpus_path},
           {"num_documents", corpus.documents.size()},
           {"vocabulary_size", corpus.vocabulary.size()},
           {"distinct_tokens", distinct.size()},
           {"total_tokens", total_tokens}};
  return out.dump(2);
}

std::string sweep_only(const RunConfig& config) {
  config.validate();
  RunArtifact artifact;
  artifact.config = config;

  PipelineState state;
  run_stage("ingest", artifact, [&] {
    CorpusOptions options{config.min_token_freq, config.stopwords_path};
    state.corpus = load_corpus(config.corpus_path, options);
    if (state.corpus.documents.empty()) {
      throw Error("corpus has no documents: " + config.corpus_path);
    }
    if (!config.reference_corpus_path.empty()) {
      state.reference_corpus = load_corpus(config.reference_corpus_path, options);
      state.has_reference = true;
    }
  });
  auto embed_backend = make_embed_backend(config);
  run_stage("embed", artifact, [&] {
    std::vector<std::string> texts;
    for (const auto& doc : state.corpus.documents) texts.push_back(doc.text);
    state.embeddings = embed_backend->embed_texts(texts, Granularity::document).vectors;
  });
  run_stage("sweep", artifact, [&] {
    CooccurrenceStats reference_stats;
    SweepOptions options;
    options.window_size = config.window_size;
    options.top_words_n = config.top_words_n;
    options.diversity_m = config.diversity_m;
    if (state.has_reference) {
      reference_stats = build_cooccurrence(state.reference_corpus, config.window_size);
      options.reference_stats = &reference_stats;
    }
    state.models =
        sweep_topic_counts(state.corpus, state.embeddings, config.ks, config.seed, options);
  });

  json sweep = json::array();
  for (const auto& model : state.models) {
    sweep.push_back({{"k", model.k}, {"npmi", model.npmi}, {"diversity", model.diversity}});
  }
  json out{{"sweep", sweep}, {"selected_k", select_best_model(state.models).k}};
  return out.dump(2);
}

}  // namespace topiclabel
