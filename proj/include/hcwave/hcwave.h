#ifndef HCWAVE_H
#define HCWAVE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define HCW_API __declspec(dllexport)
#else
#define HCW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hcw_status {
  HCW_OK = 0,
  HCW_ERR_INVALID_ARGUMENT = 1,
  HCW_ERR_CONFIG = 2,
  HCW_ERR_NUMERICAL = 3,
  HCW_ERR_IO = 4,
  HCW_ERR_INTERNAL = 5
} hcw_status;

typedef struct hcw_config hcw_config;
typedef struct hcw_report hcw_report;

HCW_API const char *hcw_version(void);
HCW_API const char *hcw_status_string(hcw_status status);
/* Message of the last failed call on this thread; "" if none. */
HCW_API const char *hcw_last_error_message(void);
/* Warnings are printed to stderr by default. */
HCW_API void hcw_set_warnings(int enabled);

HCW_API hcw_status hcw_config_create(hcw_config **out);
HCW_API hcw_status hcw_config_load(const char *path, hcw_config **out);
HCW_API hcw_status hcw_config_parse(const char *text, hcw_config **out);
HCW_API hcw_status hcw_config_set(hcw_config *cfg, const char *key, const char *value);
/* Copies the value (NUL-terminated, truncated to capacity) and stores the
   full length in *length if non-null. */
HCW_API hcw_status hcw_config_get(const hcw_config *cfg, const char *key, char *buffer,
                                  size_t capacity, size_t *length);
HCW_API void hcw_config_destroy(hcw_config *cfg);

/* Experiment drivers. Each fills *out with a report that the caller
   destroys; if out_dir is non-null the tables are also written there as CSV. */
HCW_API hcw_status hcw_solve_fine(const hcw_config *cfg, const char *out_dir,
                                  hcw_report **out);
HCW_API hcw_status hcw_hom_error(const hcw_config *cfg, const char *out_dir,
                                 hcw_report **out);
HCW_API hcw_status hcw_limit_1d(const hcw_config *cfg, const char *out_dir,
                                hcw_report **out);
HCW_API hcw_status hcw_lod_converge(const hcw_config *cfg, const char *out_dir,
                                    hcw_report **out);

/* Homogenized tensor from the cell problems, row-major 2x2 (1D uses [0]). */
HCW_API hcw_status hcw_homogenize(const hcw_config *cfg, int perforated,
                                  double tensor[4], int *dim);

HCW_API size_t hcw_report_table_count(const hcw_report *r);
HCW_API const char *hcw_report_table_name(const hcw_report *r, size_t table);
HCW_API size_t hcw_report_rows(const hcw_report *r, size_t table);
HCW_API size_t hcw_report_cols(const hcw_report *r, size_t table);
HCW_API const char *hcw_report_column_name(const hcw_report *r, size_t table, size_t col);
/* NULL when out of range. */
HCW_API const char *hcw_report_cell(const hcw_report *r, size_t table, size_t row,
                                    size_t col);
HCW_API hcw_status hcw_report_cell_double(const hcw_report *r, size_t table, size_t row,
                                          size_t col, double *value);
HCW_API hcw_status hcw_report_write(const hcw_report *r, const char *out_dir);
HCW_API void hcw_report_destroy(hcw_report *r);

HCW_API hcw_status hcw_harmonic_average_1d(double a0, double sigma_fraction,
                                           double *value);
HCW_API hcw_status hcw_estimate_rate(const double *H, const double *errors, size_t n,
                                     double *rate);

#ifdef __cplusplus
}
#endif

#endif
