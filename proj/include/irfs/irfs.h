/*
 * C interface to the interactive reinforced feature selection engine.
 *
 * All objects are opaque handles created and released by this library.
 * Functions returning irfs_status report failures through the status code;
 * the message of the most recent failure on the calling thread is available
 * through irfs_last_error(). Status values double as CLI exit codes.
 */
#ifndef IRFS_IRFS_H
#define IRFS_IRFS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(IRFS_BUILDING_LIBRARY)
#    define IRFS_API __declspec(dllexport)
#  else
#    define IRFS_API __declspec(dllimport)
#  endif
#else
#  define IRFS_API __attribute__((visibility("default")))
#endif

#define IRFS_ABI_VERSION 1u

#ifdef __cplusplus
extern "C" {
#endif

typedef enum irfs_status {
  IRFS_OK = 0,
  IRFS_ERR_INVALID_ARGUMENT = 1,
  IRFS_ERR_CONFIG = 2,
  IRFS_ERR_DATA = 3,
  IRFS_ERR_RUNTIME = 4
} irfs_status;

typedef struct irfs_dataset irfs_dataset;
typedef struct irfs_config irfs_config;
typedef struct irfs_report irfs_report;
typedef struct irfs_text irfs_text;

IRFS_API uint32_t irfs_abi_version(void);
IRFS_API const char* irfs_version_string(void);

/* Copies the calling thread's last error message (NUL-terminated, truncated
 * to buffer_size). Returns the full message length. */
IRFS_API size_t irfs_last_error(char* buffer, size_t buffer_size);

/* ---- datasets -------------------------------------------------------- */

/* label_column: header name or index (negative counts from the end); NULL or
 * "" selects the last column. has_header: -1 detect, 0 no, 1 yes. */
IRFS_API irfs_status irfs_dataset_load_csv(const char* path, const char* label_column, int has_header,
                                           irfs_dataset** out);
IRFS_API void irfs_dataset_free(irfs_dataset* dataset);
IRFS_API size_t irfs_dataset_num_features(const irfs_dataset* dataset);
IRFS_API size_t irfs_dataset_num_samples(const irfs_dataset* dataset);
IRFS_API size_t irfs_dataset_num_classes(const irfs_dataset* dataset);
/* Borrowed pointer valid while the dataset lives; NULL when out of range. */
IRFS_API const char* irfs_dataset_feature_name(const irfs_dataset* dataset, size_t index);

/* ---- run configuration ---------------------------------------------- */

IRFS_API irfs_status irfs_config_create(irfs_config** out);
IRFS_API irfs_status irfs_config_clone(const irfs_config* config, irfs_config** out);
IRFS_API void irfs_config_free(irfs_config* config);

/* Sets a field by its CLI flag name without dashes: data, label-col,
 * has-header, mode, steps, transfer, seed, split-seed, split, bins, k,
 * epsilon, gamma, lr, batch, replay, trainer-order, encoder, out, save,
 * load. */
IRFS_API irfs_status irfs_config_set(irfs_config* config, const char* key, const char* value);

/* Serialized configuration as JSON text. */
IRFS_API irfs_status irfs_config_json(const irfs_config* config, irfs_text** out);

/* ---- runs ------------------------------------------------------------ */

/* Loads the configured dataset and runs; writes report.json and trace.csv
 * when an output directory is configured. */
IRFS_API irfs_status irfs_run(const irfs_config* config, irfs_report** out);

/* Same on an already loaded dataset (the config's data path is ignored). */
IRFS_API irfs_status irfs_run_dataset(const irfs_config* config, const irfs_dataset* dataset, irfs_report** out);

IRFS_API void irfs_report_free(irfs_report* report);
IRFS_API size_t irfs_report_num_steps(const irfs_report* report);
/* Per-step accuracy and running Best Acc; NaN when out of range. */
IRFS_API double irfs_report_accuracy(const irfs_report* report, size_t step);
IRFS_API double irfs_report_best_acc(const irfs_report* report, size_t step);
IRFS_API double irfs_report_best_accuracy(const irfs_report* report);
/* Copies up to capacity indices of the best subset; returns its size. */
IRFS_API size_t irfs_report_best_subset(const irfs_report* report, size_t* indices, size_t capacity);
IRFS_API irfs_status irfs_report_trace_csv(const irfs_report* report, irfs_text** out);
IRFS_API irfs_status irfs_report_json(const irfs_report* report, irfs_text** out);
IRFS_API irfs_status irfs_report_write(const irfs_report* report, const char* directory);

/* Runs every config under every seed and aggregates Best Acc at the given
 * checkpoints into a CSV table. threads = 0 uses all hardware threads. */
IRFS_API irfs_status irfs_compare(const irfs_config* const* configs, size_t num_configs, const uint64_t* seeds,
                                  size_t num_seeds, const size_t* checkpoints, size_t num_checkpoints,
                                  unsigned threads, irfs_text** out_csv);

/* ---- text ------------------------------------------------------------ */

IRFS_API const char* irfs_text_data(const irfs_text* text);
IRFS_API size_t irfs_text_size(const irfs_text* text);
IRFS_API void irfs_text_free(irfs_text* text);

#ifdef __cplusplus
}
#endif

#endif /* IRFS_IRFS_H */
