/*
 * dragfree: frequency-domain noise budget of a servo-controlled proof mass
 * and cage, with quantum and thermal fluctuations.
 *
 * C interface. All handles are opaque; every call returns a dfn_status and
 * reports details through dfn_last_error(), which is per thread. Strings
 * returned through char** out-parameters are owned by the caller and must be
 * released with dfn_string_free().
 */
#ifndef DRAGFREE_DRAGFREE_H
#define DRAGFREE_DRAGFREE_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(DRAGFREE_BUILDING_LIBRARY)
#    define DFN_API __declspec(dllexport)
#  else
#    define DFN_API __declspec(dllimport)
#  endif
#else
#  define DFN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as CLI exit statuses. */
typedef enum dfn_status
{
    DFN_OK = 0,
    DFN_ERR_USAGE = 1,
    DFN_ERR_VALIDATION = 2,
    DFN_ERR_NUMERICAL = 3,
    DFN_ERR_VERIFICATION = 4,
    DFN_ERR_IO = 5,
    DFN_ERR_INTERNAL = 6
} dfn_status;

typedef enum dfn_target
{
    DFN_TARGET_PROOF_MASS = 0,
    DFN_TARGET_CAGE = 1,
    DFN_TARGET_BOTH = 2
} dfn_target;

typedef enum dfn_regime
{
    DFN_REGIME_HIGH_GAIN = 0,
    DFN_REGIME_FINITE_GAIN = 1
} dfn_regime;

typedef enum dfn_units
{
    DFN_UNITS_NATURAL = 0,
    DFN_UNITS_SI = 1
} dfn_units;

/* Order of per-source arrays and CSV columns. */
typedef enum dfn_source
{
    DFN_SOURCE_FP = 0,  /* force on the proof mass */
    DFN_SOURCE_FS = 1,  /* Langevin force of the coupling */
    DFN_SOURCE_FT = 2,  /* transducer back action */
    DFN_SOURCE_VSE = 3, /* sensing error */
    DFN_SOURCE_FC = 4,  /* force on the cage */
    DFN_SOURCE_COUNT = 5
} dfn_source;

typedef struct dfn_config dfn_config;

DFN_API const char* dfn_version(void);
DFN_API const char* dfn_status_name(dfn_status status);
/* Message of the last failed call on this thread; empty after success. */
DFN_API const char* dfn_last_error(void);
DFN_API void dfn_string_free(char* s);

/* Configuration ---------------------------------------------------------- */

DFN_API dfn_status dfn_config_parse(const char* text, dfn_config** out);
DFN_API dfn_status dfn_config_load(const char* path, dfn_config** out);
DFN_API void dfn_config_free(dfn_config* config);

DFN_API dfn_status dfn_config_set_target(dfn_config* config, dfn_target target);
DFN_API dfn_status dfn_config_set_regime(dfn_config* config, dfn_regime regime);
DFN_API dfn_status dfn_config_set_units(dfn_config* config, dfn_units units);
DFN_API dfn_status dfn_config_get_target(const dfn_config* config, dfn_target* out);
DFN_API dfn_status dfn_config_get_regime(const dfn_config* config, dfn_regime* out);
DFN_API dfn_status dfn_config_get_units(const dfn_config* config, dfn_units* out);

/* Gain magnitudes listed under sweep.gains in the config, if any. Writes up
 * to capacity values and the full count to *count. */
DFN_API dfn_status dfn_config_sweep_gains(const dfn_config* config, double* gains, size_t capacity,
                                          size_t* count);

/* Overrides one threshold of the verify suite, by check name. */
DFN_API dfn_status dfn_config_set_verify_threshold(dfn_config* config, const char* check, double value);

/* Canonical YAML text of the config; dfn_config_parse accepts it back. */
DFN_API dfn_status dfn_config_to_text(const dfn_config* config, char** out);

/* Commands --------------------------------------------------------------- */

DFN_API dfn_status dfn_spectrum_csv(const dfn_config* config, char** out);
DFN_API dfn_status dfn_optimize_report(const dfn_config* config, char** out);
/* Fills *out with the report even when a check fails; the status is then
 * DFN_ERR_VERIFICATION, or DFN_ERR_NUMERICAL for singular/degenerate input. */
DFN_API dfn_status dfn_verify_report(const dfn_config* config, char** out);
DFN_API dfn_status dfn_sweep_gain_csv(const dfn_config* config, const double* gains, size_t count,
                                      char** out);

/* Point evaluation ------------------------------------------------------- */

/* Per-source contributions (DFN_SOURCE_COUNT entries) and total velocity
 * density at omega. target must be DFN_TARGET_PROOF_MASS or DFN_TARGET_CAGE. */
DFN_API dfn_status dfn_spectrum_at(const dfn_config* config, double omega, dfn_target target,
                                   dfn_regime regime, double* contributions, double* total);

DFN_API dfn_status dfn_closed_form_at(const dfn_config* config, double omega, dfn_target target,
                                      double* out);

DFN_API dfn_status dfn_optimize_rho(const dfn_config* config, double omega, dfn_target target,
                                    double* rho_analytic, double* rho_numeric, double* minimum_analytic,
                                    double* minimum_numeric);

/* Transfer of one unit source to (V_p, V_c) as interleaved re/im pairs:
 * out[0..3] = Re Hp, Im Hp, Re Hc, Im Hc. */
DFN_API dfn_status dfn_transfer_at(const dfn_config* config, double omega, dfn_source source,
                                   dfn_regime regime, double* out);

DFN_API dfn_status dfn_effective_energy(double omega, double temperature, dfn_units units, double* out);

DFN_API dfn_status dfn_amplifier_spectra(double noise_temperature, double omega_t, double rho,
                                         double coupling_magnitude, dfn_units units, double* back_action,
                                         double* sensing_error);

#ifdef __cplusplus
}
#endif

#endif /* DRAGFREE_DRAGFREE_H */
