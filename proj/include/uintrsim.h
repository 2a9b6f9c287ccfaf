/* Copyright (c) 2026 uintrsim contributors.
 * Licensed under the Apache License, Version 2.0, see LICENSE for details.
 * SPDX-License-Identifier: Apache-2.0
 *
 * C API of the uintrsim shared library.
 *
 * A usim_sim handle holds one parsed configuration. Every experiment call
 * builds an independent, deterministic simulation instance from it, so a
 * handle may be reused for any number of runs. String results are written
 * into caller buffers; when a buffer is too small the call fails with
 * USIM_ERR_BUFFER and writes nothing else. All calls are synchronous.
 */

#ifndef UINTRSIM_H_
#define UINTRSIM_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct usim_sim usim_sim;

typedef enum usim_status {
  USIM_OK = 0,
  USIM_ERR_USAGE = 1,   /* bad arguments to a call */
  USIM_ERR_CONFIG = 2,  /* malformed configuration */
  USIM_ERR_CHECK = 3,   /* an acceptance-style check did not pass */
  USIM_ERR_RUNTIME = 4, /* simulation reached a fatal state */
  USIM_ERR_BUFFER = 5   /* output buffer too small */
} usim_status;

const char* usim_version(void);

/* The built-in configuration text (key = value with [section] headers). */
const char* usim_default_config(void);

/* Create a handle from configuration text; NULL uses the built-in default.
 * On failure *out is NULL and the error text is lost (no handle exists). */
usim_status usim_create(const char* config_text, usim_sim** out);
usim_status usim_create_from_file(const char* path, usim_sim** out);
void usim_destroy(usim_sim* sim);

/* Last error message recorded on this handle ("" if none). */
const char* usim_error(const usim_sim* sim);

/* Override one configuration key, e.g. usim_set(h, "experiment.seed", "7").
 * Overrides apply on top of the handle's configuration text. */
usim_status usim_set(usim_sim* sim, const char* key, const char* value);

/* Entry-latency anchor check. Writes a per-variant report into buf and the
 * number of mismatching rows into *failures (0 on full success). Returns
 * USIM_ERR_CHECK when any row mismatches. */
usim_status usim_verify_latency(usim_sim* sim, char* buf, size_t cap,
                                int* failures);

/* Render the entry timeline of a variant ("v1".."v5") as one event per
 * line: cycle,unit,action,port,detail. nested != 0 composes the entry that
 * preempts another running handler. */
usim_status usim_trace_entry(usim_sim* sim, const char* variant, int nested,
                             char* buf, size_t cap);

/* Experiments. `selector` picks the delivery scheme: "v1".."v5" for the
 * extension variants, or "kernel" / "intel" / "software" baselines.
 * When out_csv is non-NULL the CSV (header + rows) is written to that path;
 * a one-line summary is always written to buf. */
usim_status usim_run_latency(usim_sim* sim, const char* selector,
                             const char* state, const char* out_csv,
                             char* buf, size_t cap);

/* Isolation suite for one variant; *failures gets the failing case count.
 * Returns USIM_ERR_CHECK unless all six cases pass. */
usim_status usim_run_isolation(usim_sim* sim, const char* variant, char* buf,
                               size_t cap, int* failures);

usim_status usim_run_pto(usim_sim* sim, const char* selector, const char* mix,
                         unsigned freq_hz, const char* out_csv, char* buf,
                         size_t cap);

usim_status usim_run_modbus(usim_sim* sim, const char* selector,
                            unsigned long long baud, const char* out_csv,
                            char* buf, size_t cap);

/* Cartesian sweep. `schemes` and `states` are comma lists; `points` is a
 * comma list of frequencies (pto) or bauds (modbus), unused for latency. */
usim_status usim_run_sweep(usim_sim* sim, const char* experiment,
                           const char* schemes, const char* states,
                           const char* points, const char* out_csv, char* buf,
                           size_t cap);

#ifdef __cplusplus
}
#endif

#endif /* UINTRSIM_H_ */
