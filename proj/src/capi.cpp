#include "topiclabel.h"

#include <cstring>
#include <new>
#include <string>

#include "topiclabel/errors.hpp"
#include "topiclabel/pipeline.hpp"

using topiclabel::BackendError;
using topiclabel::ConfigError;
using topiclabel::RunArtifact;
using topiclabel::RunConfig;
using topiclabel::StageError;

struct tl_config {
  RunConfig config;
};

struct tl_artifact {
  RunArtifact artifact;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Runs fn, translating exceptions to status codes and the thread-local
// error message.
template <typename Fn>
tl_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return TL_OK;
  } catch (const StageError& e) {
    g_last_error = e.what();
    return e.backend_cause() ? TL_BACKEND_ERROR : TL_STAGE_ERROR;
  } catch (const BackendError& e) {
    g_last_error = e.what();
    return TL_BACKEND_ERROR;
  } catch (const ConfigError& e) {
    g_last_error = e.what();
    return TL_CONFIG_ERROR;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TL_ERROR;
  } catch (...) {
    g_last_error = "unknown error";
    return TL_ERROR;
  }
}

}  // namespace

extern "C" {

const char* tl_version(void) { return topiclabel::kPipelineVersion; }

const char* tl_last_error(void) { return g_last_error.c_str(); }

void tl_string_free(char* s) { delete[] s; }

tl_status tl_config_parse(const char* json_text, tl_config** out) {
  if (!json_text || !out) {
    g_last_error = "tl_config_parse: null argument";
    return TL_CONFIG_ERROR;
  }
  *out = nullptr;
  return guarded([&] {
    auto config = RunConfig::from_json_text(json_text, /*apply_env=*/true);
    *out = new tl_config{std::move(config)};
  });
}

tl_status tl_config_dump(const tl_config* config, char** json_out) {
  if (!config || !json_out) {
    g_last_error = "tl_config_dump: null argument";
    return TL_CONFIG_ERROR;
  }
  return guarded([&] { *json_out = dup_string(config->config.to_json_text()); });
}

void tl_config_free(tl_config* config) { delete config; }

tl_status tl_ingest_stats(const tl_config* config, char** stats_json_out) {
  if (!config || !stats_json_out) {
    g_last_error = "tl_ingest_stats: null argument";
    return TL_CONFIG_ERROR;
  }
  return guarded([&] { *stats_json_out = dup_string(topiclabel::ingest_stats(config->config)); });
}

tl_status tl_sweep(const tl_config* config, char** sweep_json_out) {
  if (!config || !sweep_json_out) {
    g_last_error = "tl_sweep: null argument";
    return TL_CONFIG_ERROR;
  }
  return guarded([&] { *sweep_json_out = dup_string(topiclabel::sweep_only(config->config)); });
}

tl_status tl_run(const tl_config* config, char** artifact_dir_out) {
  if (!config || !artifact_dir_out) {
    g_last_error = "tl_run: null argument";
    return TL_CONFIG_ERROR;
  }
  return guarded([&] {
    RunArtifact artifact = topiclabel::run_pipeline(config->config);
    *artifact_dir_out = dup_string(topiclabel::artifact_directory(artifact));
  });
}

tl_status tl_artifact_open(const char* path, tl_artifact** out) {
  if (!path || !out) {
    g_last_error = "tl_artifact_open: null argument";
    return TL_CONFIG_ERROR;
  }
  *out = nullptr;
  return guarded([&] { *out = new tl_artifact{topiclabel::load_artifact(path)}; });
}

tl_status tl_artifact_report(const tl_artifact* artifact, const char* format, char** report_out) {
  if (!artifact || !format || !report_out) {
    g_last_error = "tl_artifact_report: null argument";
    return TL_CONFIG_ERROR;
  }
  const std::string fmt(format);
  if (fmt != "text" && fmt != "json") {
    g_last_error = "tl_artifact_report: format must be \"text\" or \"json\"";
    return TL_CONFIG_ERROR;
  }
  return guarded([&] {
    const auto rendered = topiclabel::report(artifact->artifact,
                                             fmt == "json" ? topiclabel::ReportFormat::json
                                                           : topiclabel::ReportFormat::text_table);
    *report_out = dup_string(rendered);
  });
}

tl_status tl_artifact_reevaluate(const tl_artifact* artifact, char** scores_json_out,
                                 int* matches_out) {
  if (!artifact || !scores_json_out || !matches_out) {
    g_last_error = "tl_artifact_reevaluate: null argument";
    return TL_CONFIG_ERROR;
  }
  return guarded([&] {
    const auto recomputed = topiclabel::reevaluate(artifact->artifact);
    const auto recomputed_json =
        topiclabel::scores_to_json_text(recomputed, artifact->artifact.source_order);
    const auto stored_json = topiclabel::scores_to_json_text(artifact->artifact.scores,
                                                             artifact->artifact.source_order);
    *matches_out = recomputed_json == stored_json ? 1 : 0;
    *scores_json_out = dup_string(recomputed_json);
  });
}

void tl_artifact_free(tl_artifact* artifact) { delete artifact; }

}  // extern "C"
