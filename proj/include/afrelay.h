/* C API of the AF relay toolkit: scenario files, per-state AF rates, the
 * stability-region LPs, the back-pressure simulator and the figure data
 * generators, behind opaque handles and status codes.
 *
 * Every function that can fail returns afr_status; afr_last_error() holds a
 * thread-local diagnostic for the most recent failure on the calling thread.
 * Strings returned through char** are owned by the caller and must be
 * released with afr_string_free(). */
#ifndef AFRELAY_H
#define AFRELAY_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define AFR_API __declspec(dllexport)
#else
#define AFR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum afr_status {
  AFR_OK = 0,
  AFR_ERROR_INVALID = 1, /* bad argument or scenario validation failure */
  AFR_ERROR_PARSE = 2,   /* malformed scenario text */
  AFR_ERROR_SOLVER = 3,  /* LP did not converge */
  AFR_ERROR_IO = 4       /* file could not be read or written */
} afr_status;

typedef enum afr_region_form {
  AFR_FORM_MIN = 0, /* maximize sum of min(fill, drain) */
  AFR_FORM_EQ = 1   /* maximize fill subject to fill <= drain */
} afr_region_form;

typedef enum afr_verdict {
  AFR_VERDICT_STABLE = 0,
  AFR_VERDICT_UNSTABLE = 1,
  AFR_VERDICT_INCONCLUSIVE = 2
} afr_verdict;

typedef struct afr_scenario afr_scenario;
typedef struct afr_rate_table afr_rate_table;
typedef struct afr_region afr_region;
typedef struct afr_sim_result afr_sim_result;

AFR_API const char* afr_last_error(void);
AFR_API void afr_string_free(char* s);

/* ---- scenarios ---- */

AFR_API afr_status afr_scenario_load(const char* path, afr_scenario** out);
AFR_API afr_status afr_scenario_parse(const char* text, afr_scenario** out);
AFR_API afr_status afr_scenario_format(const afr_scenario* sc, char** out_text);
AFR_API void afr_scenario_free(afr_scenario* sc);

AFR_API double afr_scenario_lambda(const afr_scenario* sc);
AFR_API uint64_t afr_scenario_horizon(const afr_scenario* sc);
AFR_API size_t afr_scenario_seed_count(const afr_scenario* sc);
AFR_API uint64_t afr_scenario_seed(const afr_scenario* sc, size_t index);
AFR_API double afr_scenario_tolerance(const afr_scenario* sc);
AFR_API afr_status afr_scenario_set_tolerance(afr_scenario* sc, double tol);

/* ---- per-state AF rates ---- */

/* 0.5 * log2(1 + x); x must be non-negative. */
AFR_API afr_status afr_capacity(double x, double* out);

/* Best AF rate for gains [g_s1, g_s2, g_1d, g_2d] under the power budget.
 * powers receives the attaining allocation [p_s, p_1, p_2]; either output
 * pointer may be NULL. */
AFR_API afr_status afr_af_rate(const double gains[4], double power,
                               double tolerance, double* rate,
                               double powers[3]);

AFR_API afr_status afr_rate_table_build(const afr_scenario* sc,
                                        afr_rate_table** out);
AFR_API void afr_rate_table_free(afr_rate_table* table);
AFR_API size_t afr_rate_table_size(const afr_rate_table* table);
AFR_API afr_status afr_rate_table_row(const afr_rate_table* table, size_t index,
                                      double gains[4], double* rate,
                                      double powers[3]);
AFR_API afr_status afr_rate_table_lookup(const afr_rate_table* table,
                                         const double gains[4], double* rate);
/* Full |F|^4 table as CSV. */
AFR_API afr_status afr_rate_table_csv(const afr_rate_table* table, char** out);
/* Only the scenario's support states. */
AFR_API afr_status afr_rate_table_support_csv(const afr_rate_table* table,
                                              const afr_scenario* sc,
                                              char** out);

/* ---- stability region ---- */

AFR_API afr_status afr_region_solve(const afr_scenario* sc,
                                    const afr_rate_table* table,
                                    afr_region_form form, afr_region** out);
AFR_API void afr_region_free(afr_region* region);
AFR_API double afr_region_r_max(const afr_region* region);
AFR_API afr_status afr_region_csv(const afr_region* region, char** out);

/* feasible receives 1 when rate r is supportable, 0 otherwise. */
AFR_API afr_status afr_supportable(const afr_scenario* sc,
                                   const afr_rate_table* table, double r,
                                   int* feasible);

AFR_API afr_status afr_synchronous_baseline(const afr_scenario* sc,
                                            const afr_rate_table* table,
                                            double* out);

/* ---- simulation ---- */

/* One trajectory at mean arrival rate lambda. horizon 0 uses the scenario's
 * configured horizon. event_log_path may be NULL; when set, a per-slot CSV
 * record is written there. */
AFR_API afr_status afr_simulate(const afr_scenario* sc,
                                const afr_rate_table* table, double lambda,
                                uint64_t horizon, uint64_t seed,
                                const char* event_log_path,
                                afr_sim_result** out);
AFR_API void afr_sim_result_free(afr_sim_result* result);
AFR_API double afr_sim_delivered_rate(const afr_sim_result* result);
AFR_API double afr_sim_backlog_slope(const afr_sim_result* result);
AFR_API afr_verdict afr_sim_verdict(const afr_sim_result* result);
AFR_API afr_status afr_sim_summary_csv(const afr_sim_result* result,
                                       char** out);

/* Verdict table over a lambda grid, all seeds, run in parallel. */
AFR_API afr_status afr_sweep_csv(const afr_scenario* sc,
                                 const afr_rate_table* table,
                                 const double* lambdas, size_t n_lambdas,
                                 uint64_t horizon, const uint64_t* seeds,
                                 size_t n_seeds, char** out);

/* Outage-family comparison data: gamma, synchronous average, closed-form
 * asynchronous rate, LP boundary. tolerance <= 0 uses the default (1e-9). */
AFR_API afr_status afr_figure2_csv(const double* gammas, size_t n_gammas,
                                   double tolerance, char** out);

#ifdef __cplusplus
}
#endif

#endif /* AFRELAY_H */
