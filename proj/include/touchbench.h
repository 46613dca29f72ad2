/* Copyright 2026 The touchbench Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *  http://www.apache.org/licenses/LICENSE-2.0
 */

/* C interface of the touchbench core library. All entry points return a
 * tb_status; on failure tb_last_error() holds a message for the calling
 * thread. Strings returned through out parameters are owned by the caller
 * and released with tb_string_free(). */

#ifndef TOUCHBENCH_H_
#define TOUCHBENCH_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tb_status {
  TB_OK = 0,
  TB_USAGE_ERROR = 1,        /* bad arguments or configuration */
  TB_DATA_ERROR = 2,         /* malformed or unreadable input */
  TB_PRECONDITION_ERROR = 3, /* valid input, unmet requirement */
  TB_INTERNAL_ERROR = 4
} tb_status;

typedef struct tb_dataset tb_dataset;

const char* tb_version(void);

/* Message of the most recent failure on this thread; empty string if none.
 * The pointer stays valid until the next failing call on the thread. */
const char* tb_last_error(void);

void tb_string_free(char* s);

/* catalog_path NULL selects the built-in device catalog. */
tb_status tb_dataset_open(const char* csv_path, const char* catalog_path, tb_dataset** out);

/* config_text uses the synth key=value schema; NULL or "" means defaults. */
tb_status tb_dataset_from_synth(const char* config_text, tb_dataset** out);

tb_status tb_dataset_save(const tb_dataset* d, const char* csv_path);

/* JSON object with users/sessions/points counts and ingest warnings. */
tb_status tb_dataset_validate_info(const tb_dataset* d, char** json_out);

void tb_dataset_free(tb_dataset* d);

/* Per-stroke feature matrix CSV, all swipe directions. */
tb_status tb_features_dump(const tb_dataset* d, const char* csv_path);

/* Runs an experiment described by spec key=value text into out_dir
 * (manifest.json, results.jsonl, stats.json). jobs = worker threads;
 * command is recorded verbatim in the manifest (may be NULL). */
tb_status tb_run(const tb_dataset* d, const char* spec_text, const char* out_dir,
                 unsigned jobs, const char* command);

/* results.jsonl -> summary.csv (+ roc.csv when present) in out_dir. */
tb_status tb_report(const char* results_jsonl_path, const char* out_dir);

/* Effective configuration after applying config_text over the defaults;
 * spec_text semantics as in tb_run. */
tb_status tb_print_spec_config(const char* spec_text, char** text_out);
tb_status tb_print_synth_config(const char* config_text, char** text_out);

#ifdef __cplusplus
}
#endif

#endif /* TOUCHBENCH_H_ */
