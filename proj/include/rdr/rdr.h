/* Copyright 2026 The rdr-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RDR_RDR_H_
#define RDR_RDR_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define RDR_API __attribute__((visibility("default")))
#else
#define RDR_API
#endif

/* Status codes. Values are stable. */
typedef enum rdr_status {
    RDR_OK = 0,
    RDR_INVALID_DIMENSION = 1,
    RDR_TRUNCATION_ERROR = 2,
    RDR_SPACE_MISMATCH = 3,
    RDR_INVALID_ARGUMENT = 4,
    RDR_INVALID_PARAMETERS = 5,
    RDR_INTEGRATION_UNSTABLE = 6,
    RDR_DEGENERATE_STEADY_STATE = 7,
    RDR_TOO_FEW_SAMPLES = 8,
    RDR_UNKNOWN_SCENARIO = 9,
    RDR_CONFIG_ERROR = 10,
    RDR_IO_ERROR = 11,
    RDR_INTERNAL_ERROR = 12
} rdr_status;

typedef enum rdr_status_class {
    RDR_CLASS_OK = 0,
    RDR_CLASS_CONFIG = 1,    /* bad input: configuration, arguments, parameters */
    RDR_CLASS_NUMERICAL = 2  /* the numerics failed on valid input */
} rdr_status_class;

typedef enum rdr_table_kind {
    RDR_TABLE_SERIES = 0, /* first column time_us */
    RDR_TABLE_SWEEP = 1,  /* first column the swept value */
    RDR_TABLE_GRID = 2    /* first column x; other columns one p value each */
} rdr_table_kind;

/* Results of one request: named numeric tables plus JSON metadata. */
typedef struct rdr_output rdr_output;

RDR_API const char *rdr_version(void);
RDR_API const char *rdr_status_name(rdr_status status);
RDR_API rdr_status_class rdr_status_classify(rdr_status status);

/* Message of the last failed call on this thread; "" if none. */
RDR_API const char *rdr_last_error(void);
/* Simulation time (us) of the last failure, if it carried one. Returns 1 and
 * writes *time_us when available, else 0. */
RDR_API int rdr_last_error_time(double *time_us);

/* Frees strings returned through char ** out-parameters. */
RDR_API void rdr_string_free(char *s);

/* JSON array of {"name", "description"} for the scenario catalog. */
RDR_API rdr_status rdr_catalog(char **json_out);

/* Calibration report for a request {"target_n_m": n, "params": {...}}. */
RDR_API rdr_status rdr_calibrate(const char *request_json, char **json_out);

/* Runs a catalog scenario {"scenario": name, "overrides": {...}} or a
 * configured one {"config": {...}}. */
RDR_API rdr_status rdr_run(const char *request_json, rdr_output **out);

/* {"scenario", "axis", "values": [...], "overrides"}: one row per value. */
RDR_API rdr_status rdr_sweep(const char *request_json, rdr_output **out);

/* {"scenario", "times_us": [...], "state", "half_width", "points",
 * "overrides"}: one Wigner grid per requested time. */
RDR_API rdr_status rdr_wigner(const char *request_json, rdr_output **out);

RDR_API void rdr_output_free(rdr_output *out);
/* Metadata JSON owned by `out`. */
RDR_API const char *rdr_output_metadata(const rdr_output *out);
RDR_API size_t rdr_output_table_count(const rdr_output *out);
RDR_API const char *rdr_output_table_name(const rdr_output *out, size_t table);
RDR_API rdr_table_kind rdr_output_table_kind(const rdr_output *out, size_t table);
RDR_API size_t rdr_output_column_count(const rdr_output *out, size_t table);
RDR_API size_t rdr_output_row_count(const rdr_output *out, size_t table);
RDR_API const char *rdr_output_column_name(const rdr_output *out, size_t table, size_t column);
/* Column values, row_count entries, owned by `out`. NaN marks "none". */
RDR_API const double *rdr_output_column(const rdr_output *out, size_t table, size_t column);

#ifdef __cplusplus
}
#endif

#endif /* RDR_RDR_H_ */
