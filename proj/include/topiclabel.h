/* C API for the topiclabel pipeline library.
 *
 * All functions return tl_status; 0 is success. On failure tl_last_error()
 * holds a message for the calling thread. Strings returned through out
 * parameters are heap-allocated and must be released with tl_string_free().
 */
#ifndef TOPICLABEL_H
#define TOPICLABEL_H

#if defined(_WIN32)
#define TL_API __declspec(dllexport)
#else
#define TL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tl_status {
  TL_OK = 0,
  TL_ERROR = 1,         /* unclassified failure */
  TL_CONFIG_ERROR = 2,  /* bad configuration or unusable input path */
  TL_BACKEND_ERROR = 3, /* embedding/summarization backend failure */
  TL_STAGE_ERROR = 4    /* a pipeline stage aborted */
} tl_status;

typedef struct tl_config tl_config;
typedef struct tl_artifact tl_artifact;

TL_API const char* tl_version(void);

/* Message for the most recent failure on this thread; "" if none. */
TL_API const char* tl_last_error(void);

TL_API void tl_string_free(char* s);

/* Parses a JSON config (missing keys take defaults) and applies the
 * TOPICLABEL_EMBED_URL / TOPICLABEL_SUMM_URL env overrides. */
TL_API tl_status tl_config_parse(const char* json_text, tl_config** out);
TL_API tl_status tl_config_dump(const tl_config* config, char** json_out);
TL_API void tl_config_free(tl_config* config);

/* Loads the corpus and reports ingestion stats as JSON. */
TL_API tl_status tl_ingest_stats(const tl_config* config, char** stats_json_out);

/* Embeds, sweeps the configured topic counts and reports the table plus the
 * selected k as JSON, without labeling or evaluation. */
TL_API tl_status tl_sweep(const tl_config* config, char** sweep_json_out);

/* Runs the full pipeline; returns the artifact directory path. */
TL_API tl_status tl_run(const tl_config* config, char** artifact_dir_out);

/* Accepts a run directory or a path to its artifact.json. */
TL_API tl_status tl_artifact_open(const char* path, tl_artifact** out);

/* format is "text" or "json". */
TL_API tl_status tl_artifact_report(const tl_artifact* artifact, const char* format,
                                    char** report_out);

/* Recomputes all evaluation scores from the persisted labels and references.
 * scores_json_out receives the recomputed scores; *matches_out is 1 when they
 * equal the stored scores exactly. */
TL_API tl_status tl_artifact_reevaluate(const tl_artifact* artifact, char** scores_json_out,
                                        int* matches_out);

TL_API void tl_artifact_free(tl_artifact* artifact);

#ifdef __cplusplus
}
#endif

#endif /* TOPICLABEL_H */
