/* SPDX-License-Identifier: Apache-2.0 */

/*
 * nearfocus - near-field multi-user MIMO localization and beam-focusing simulation
 *
 * C interface to the simulation library. A scenario is created from a figure
 * preset, optionally adjusted via JSON overrides and the typed setters, and
 * then executed with nf_run, which writes the figure's CSV and JSON outputs
 * into a directory.
 *
 * All functions returning int use the NF_* status codes. On any failure the
 * thread-local message returned by nf_last_error() describes the cause.
 */

#ifndef NEARFOCUS_H
#define NEARFOCUS_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define NF_OK 0
#define NF_ERR_CONFIG 1  /* invalid configuration, arguments, or input files */
#define NF_ERR_NUMERIC 2 /* numerical failure while running */

typedef struct nf_scenario nf_scenario;

/* Library version string, e.g. "0.1.0". Static storage; do not free. */
const char* nf_version(void);

/* Message of the most recent failure on this thread, or an empty string.
 * Static thread-local storage; valid until the next failing call. */
const char* nf_last_error(void);

/* Creates a scenario from the named pipeline preset: "fig1", "fig2", "fig3",
 * "fig4", "fig5", or "run". Returns NULL on unknown names. */
nf_scenario* nf_scenario_create(const char* figure);

/* Deep copy. Returns NULL on allocation failure or NULL input. */
nf_scenario* nf_scenario_clone(const nf_scenario* scenario);

/* Frees a scenario. NULL is ignored. */
void nf_scenario_free(nf_scenario* scenario);

/* Merges JSON overrides into the scenario's configuration. Unknown keys are
 * rejected and leave the scenario unchanged. */
int nf_scenario_load_json(nf_scenario* scenario, const char* json_text);
int nf_scenario_load_json_file(nf_scenario* scenario, const char* path);

int nf_scenario_set_seed(nf_scenario* scenario, uint64_t seed);
int nf_scenario_set_trials(nf_scenario* scenario, long long trials);
int nf_scenario_set_threads(nf_scenario* scenario, int threads);
/* Nonzero enables the large-array substitution (512 antennas); applies to
 * fig4, fig5, and run only, which nf_run checks. */
int nf_scenario_set_paper_scale(nf_scenario* scenario, int enabled);

/* Validates the configuration and returns the resolved settings (inputs plus
 * derived quantities) as a JSON string. Free with nf_string_free. Returns
 * NULL on invalid configurations. */
char* nf_scenario_resolved_json(const nf_scenario* scenario);

void nf_string_free(char* text);

/* Validates, runs the scenario's pipeline, and writes its output files into
 * out_dir (created if missing). Returns NF_OK, NF_ERR_CONFIG, or
 * NF_ERR_NUMERIC. */
int nf_run(const nf_scenario* scenario, const char* out_dir);

/* Near-field boundary 2 D^2 / lambda of a uniform linear array with
 * n_antennas elements spaced spacing_m apart at carrier fc_hz. Returns NaN
 * on invalid arguments. */
double nf_fraunhofer_distance_m(int n_antennas, double spacing_m, double fc_hz);

/* Reflection coefficient in dB at carrier fc_hz for scattered paths. */
double nf_reflection_coefficient_db(double fc_hz);

#ifdef __cplusplus
}
#endif

#endif /* NEARFOCUS_H */
