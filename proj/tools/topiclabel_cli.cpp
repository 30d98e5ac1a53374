// Command-line front end. Links only the C API; config plumbing (flag
// parsing, JSON merging) happens here and everything else goes through
// libtopiclabel.

#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "topiclabel.h"

namespace {

using nlohmann::json;

struct ConfigFlags {
  std::string config_file;
  std::string corpus;
  std::string output_dir;
  std::string embed_url;
  std::string summ_url;
  std::vector<int> ks;
  std::uint64_t seed = 0;
  int window_size = 0;
  int top_words_n = 0;
  int diversity_m = 0;
  int num_beams = 0;
  int max_input_tokens = 0;
  int min_token_freq = 0;
  std::string stopwords;
  std::string reference_corpus;
  bool length_normalize_rouge = false;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
  cmd->add_option("--config", flags.config_file, "JSON config file (flags override it)");
  cmd->add_option("--corpus", flags.corpus, "JSONL corpus, one {\"id\",\"text\"} per line");
  cmd->add_option("--output-dir", flags.output_dir, "directory for run artifacts");
  cmd->add_option("--embed-url", flags.embed_url, "embedding backend base URL (default: stub)");
  cmd->add_option("--summ-url", flags.summ_url, "summarizer backend base URL (default: stub)");
  cmd->add_option("--ks", flags.ks, "topic counts to sweep")->delimiter(',');
  cmd->add_option("--seed", flags.seed, "clustering seed");
  cmd->add_option("--window-size", flags.window_size, "NPMI sliding window size");
  cmd->add_option("--top-words-n", flags.top_words_n, "words per topic list");
  cmd->add_option("--diversity-m", flags.diversity_m, "list size for the diversity metric");
  cmd->add_option("--num-beams", flags.num_beams, "beam count passed to summarizers");
  cmd->add_option("--max-input-tokens", flags.max_input_tokens,
                  "whitespace-token budget for summarizer input");
  cmd->add_option("--min-token-freq", flags.min_token_freq,
                  "drop rarer tokens from the vocabulary");
  cmd->add_option("--stopwords", flags.stopwords, "newline-separated stopword list");
  cmd->add_option("--reference-corpus", flags.reference_corpus,
                  "JSONL corpus for NPMI reference statistics");
  cmd->add_flag("--length-normalize-rouge", flags.length_normalize_rouge,
                "discount ROUGE-1 F1 for candidates longer than the reference");
}

int fail(tl_status status, const std::string& context) {
  std::cerr << "error: " << context << ": " << tl_last_error() << "\n";
  return static_cast<int>(status);
}

// File config first, then explicitly passed flags on top. Env URL overrides
// are applied by tl_config_parse.
json merge_config(const CLI::App* cmd, const ConfigFlags& flags, std::string& error) {
  json config = json::object();
  if (!flags.config_file.empty()) {
    std::FILE* f = std::fopen(flags.config_file.c_str(), "rb");
    if (!f) {
      error = "cannot open config file: " + flags.config_file;
      return config;
    }
    std::string text;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, n);
    std::fclose(f);
    config = json::parse(text, nullptr, false);
    if (config.is_discarded()) {
      error = "config file is not valid JSON: " + flags.config_file;
      return json::object();
    }
  }
  auto passed = [&](const std::string& name) { return cmd->count(name) > 0; };
  if (passed("--corpus")) config["corpus"] = flags.corpus;
  if (passed("--output-dir")) config["output_dir"] = flags.output_dir;
  if (passed("--embed-url")) config["embed_url"] = flags.embed_url;
  if (passed("--summ-url")) {
    config["summarizers"] = json::array({{{"id", "remote"}, {"url", flags.summ_url}}});
  }
  if (passed("--ks")) config["ks"] = flags.ks;
  if (passed("--seed")) config["seed"] = flags.seed;
  if (passed("--window-size")) config["window_size"] = flags.window_size;
  if (passed("--top-words-n")) config["top_words_n"] = flags.top_words_n;
  if (passed("--diversity-m")) config["diversity_m"] = flags.diversity_m;
  if (passed("--num-beams")) config["num_beams"] = flags.num_beams;
  if (passed("--max-input-tokens")) config["max_input_tokens"] = flags.max_input_tokens;
  if (passed("--min-token-freq")) config["min_token_freq"] = flags.min_token_freq;
  if (passed("--stopwords")) config["stopwords"] = flags.stopwords;
  if (passed("--reference-corpus")) config["reference_corpus"] = flags.reference_corpus;
  if (passed("--length-normalize-rouge")) {
    config["length_normalize_rouge"] = flags.length_normalize_rouge;
  }
  return config;
}

using ConfigHandle = std::unique_ptr<tl_config, decltype(&tl_config_free)>;

int parse_config(const CLI::App* cmd, const ConfigFlags& flags, ConfigHandle& out) {
  std::string error;
  const json merged = merge_config(cmd, flags, error);
  if (!error.empty()) {
    std::cerr << "error: " << error << "\n";
    return static_cast<int>(TL_CONFIG_ERROR);
  }
  tl_config* config = nullptr;
  if (auto status = tl_config_parse(merged.dump().c_str(), &config); status != TL_OK) {
    return fail(status, "config");
  }
  out.reset(config);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic modeling as clustering plus multi-document summary labels"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tl_version()));

  ConfigFlags flags;
  std::string artifact_path;
  std::string format = "text";

  auto* ingest = app.add_subcommand("ingest", "load a corpus and print ingestion stats");
  add_config_flags(ingest, flags);

  auto* sweep = app.add_subcommand("sweep", "cluster at each configured k and print the table");
  add_config_flags(sweep, flags);

  auto* run = app.add_subcommand("run", "run the full pipeline and write an artifact");
  add_config_flags(run, flags);

  auto* evaluate =
      app.add_subcommand("evaluate", "recompute evaluation scores from a persisted artifact");
  evaluate->add_option("artifact", artifact_path, "run directory or artifact.json")->required();

  auto* report = app.add_subcommand("report", "render the score and sweep tables");
  report->add_option("artifact", artifact_path, "run directory or artifact.json")->required();
  report->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  CLI11_PARSE(app, argc, argv);

  if (ingest->parsed() || sweep->parsed() || run->parsed()) {
    auto* cmd = ingest->parsed() ? ingest : sweep->parsed() ? sweep : run;
    ConfigHandle config(nullptr, &tl_config_free);
    if (int rc = parse_config(cmd, flags, config); rc != 0) return rc;

    char* out = nullptr;
    if (ingest->parsed()) {
      if (auto status = tl_ingest_stats(config.get(), &out); status != TL_OK) {
        return fail(status, "ingest");
      }
      std::cout << out << "\n";
    } else if (sweep->parsed()) {
      if (auto status = tl_sweep(config.get(), &out); status != TL_OK) {
        return fail(status, "sweep");
      }
      std::cout << out << "\n";
    } else {
      if (auto status = tl_run(config.get(), &out); status != TL_OK) {
        return fail(status, "run");
      }
      std::cout << out << "\n";
    }
    tl_string_free(out);
    return 0;
  }

  tl_artifact* artifact = nullptr;
  if (auto status = tl_artifact_open(artifact_path.c_str(), &artifact); status != TL_OK) {
    return fail(status, "artifact");
  }
  std::unique_ptr<tl_artifact, decltype(&tl_artifact_free)> guard(artifact, &tl_artifact_free);

  if (report->parsed()) {
    char* rendered = nullptr;
    if (auto status = tl_artifact_report(artifact, format.c_str(), &rendered); status != TL_OK) {
      return fail(status, "report");
    }
    std::cout << rendered;
    tl_string_free(rendered);
    return 0;
  }

  // evaluate
  char* scores = nullptr;
  int matches = 0;
  if (auto status = tl_artifact_reevaluate(artifact, &scores, &matches); status != TL_OK) {
    return fail(status, "evaluate");
  }
  std::cout << scores << "\n";
  tl_string_free(scores);
  if (!matches) {
    std::cerr << "error: recomputed scores do not match the stored artifact\n";
    return static_cast<int>(TL_STAGE_ERROR);
  }
  std::cerr << "recomputed scores match the stored artifact\n";
  return 0;
}
