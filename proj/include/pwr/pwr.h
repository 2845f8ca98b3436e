/*
 * C interface to the power-intent toolkit.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns a pwr_status; on
 * failure pwr_last_error() describes the problem until the next failing call
 * on the same thread. Output handles are written only on PWR_OK.
 */
#ifndef PWR_PWR_H
#define PWR_PWR_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(PWR_BUILDING_LIBRARY)
#define PWR_API __declspec(dllexport)
#else
#define PWR_API __declspec(dllimport)
#endif
#else
#define PWR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pwr_status {
  PWR_OK = 0,
  PWR_ERR_INVALID_ARGUMENT = 1, /* null handle, unknown enum value */
  PWR_ERR_PARSE = 2,            /* malformed input text */
  PWR_ERR_PRECONDITION = 3,     /* inputs violate an operation's precondition */
  PWR_ERR_INFEASIBLE = 4,       /* no operating point meets a requirement */
  PWR_ERR_INTERNAL = 5
} pwr_status;

typedef enum pwr_format { PWR_FORMAT_TEXT = 0, PWR_FORMAT_JSON = 1, PWR_FORMAT_CSV = 2 } pwr_format;

typedef struct pwr_design pwr_design;
typedef struct pwr_buffer pwr_buffer;
typedef struct pwr_config pwr_config;

PWR_API const char* pwr_version(void);
PWR_API const char* pwr_last_error(void);
PWR_API const char* pwr_status_name(pwr_status status);

/* Owned NUL-terminated text. */
PWR_API const char* pwr_buffer_data(const pwr_buffer* buffer);
PWR_API size_t pwr_buffer_size(const pwr_buffer* buffer);
PWR_API void pwr_buffer_free(pwr_buffer* buffer);

/* key=value overrides of the leakage model, PIM timing and analyzer flags.
 * A NULL text yields the defaults. Functions taking a config accept NULL
 * for defaults too. */
PWR_API pwr_status pwr_config_parse(const char* text, pwr_config** out);
PWR_API void pwr_config_free(pwr_config* config);

PWR_API pwr_status pwr_design_parse(const char* netlist_text, const char* intent_text, pwr_design** out);
PWR_API void pwr_design_free(pwr_design* design);
/* Either output may be NULL. */
PWR_API pwr_status pwr_design_serialize(const pwr_design* design, pwr_buffer** netlist, pwr_buffer** intent);
PWR_API pwr_status pwr_design_counts(const pwr_design* design, size_t* islands, size_t* cells, size_t* nets,
                                     size_t* ports);

/* Crossing issues plus missing sleep pins. report and violations may be NULL. */
PWR_API pwr_status pwr_check(const pwr_design* design, const pwr_config* config, pwr_format format,
                             pwr_buffer** report, size_t* violations);

/* Inserts level shifters and isolation cells, then sleep pins for every
 * switchable island. The result passes pwr_check. */
PWR_API pwr_status pwr_fix(const pwr_design* design, const pwr_config* config, pwr_design** fixed,
                           size_t* cells_added);

PWR_API pwr_status pwr_insert_sleep_pins(const pwr_design* design, const char* island, pwr_design** out);

typedef struct pwr_power_options {
  double f_clk_mhz;
  double k;
  double temp_c;
  const char* const* sleeping; /* island names */
  size_t sleeping_count;
} pwr_power_options;

PWR_API void pwr_power_options_init(pwr_power_options* options);

/* activity_text may be NULL (all nets idle). */
PWR_API pwr_status pwr_power(const pwr_design* design, const char* activity_text, const pwr_power_options* options,
                             const pwr_config* config, pwr_format format, pwr_buffer** report);

typedef struct pwr_pin {
  const char* island;
  double vdd;
} pwr_pin;

typedef struct pwr_optimize_options {
  double freq_mhz; /* requirement for every island that is not pinned */
  const pwr_pin* pins;
  size_t pin_count;
  double baseline_vdd;       /* <= 0 selects the highest characterized vdd */
  const char* activity_text; /* optional, for absolute dynamic watts */
  double f_clk_mhz;          /* <= 0 reuses freq_mhz */
  double k;
} pwr_optimize_options;

PWR_API void pwr_optimize_options_init(pwr_optimize_options* options);

PWR_API pwr_status pwr_optimize(const pwr_design* design, const char* characterization_text,
                                const pwr_optimize_options* options, pwr_format format, pwr_buffer** report);

/* Text format is the trace file (`<ns> <EVENT>` lines). vcd may be NULL. */
PWR_API pwr_status pwr_sleep_sim(const char* script_text, const pwr_config* config, pwr_format format,
                                 pwr_buffer** trace, pwr_buffer** vcd);

PWR_API pwr_status pwr_taxonomy(pwr_format format, pwr_buffer** report);

/* Plot data as csv. */
PWR_API pwr_status pwr_leakage_sweep(const pwr_config* config, double temp_c, double v_min, double v_step,
                                     pwr_buffer** csv);
PWR_API pwr_status pwr_characterization_plot(const char* characterization_text, pwr_buffer** csv);

PWR_API pwr_status pwr_theoretical_reduction(double v_from, double v_to, double* fraction);
PWR_API pwr_status pwr_leakage_current(const pwr_config* config, double v_slp, double temp_c, double* amperes);

/* calibration_text (may be NULL) holds `calib` lines overriding the
 * built-in table. device is "nand2" or "sram"; source "model" or "silicon". */
PWR_API pwr_status pwr_calibration_factor(const char* calibration_text, const char* device, int temp_c,
                                          const char* source, double* factor);

#ifdef __cplusplus
}
#endif

#endif /* PWR_PWR_H */
