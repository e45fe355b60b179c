#include "hcwave/hcwave.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "hcwave/config.hpp"
#include "hcwave/error.hpp"
#include "hcwave/experiments.hpp"

struct hcw_config {
  hcwave::ExperimentConfig config;
};

struct hcw_report {
  hcwave::Report report;
};

namespace {

thread_local std::string last_error;

hcw_status status_of(hcwave::ErrorKind kind) {
  switch (kind) {
    case hcwave::ErrorKind::invalid_argument: return HCW_ERR_INVALID_ARGUMENT;
    case hcwave::ErrorKind::config: return HCW_ERR_CONFIG;
    case hcwave::ErrorKind::numerical: return HCW_ERR_NUMERICAL;
    case hcwave::ErrorKind::io: return HCW_ERR_IO;
  }
  return HCW_ERR_INTERNAL;
}

template <class F>
hcw_status guarded(F &&body) {
  try {
    body();
    last_error.clear();
    return HCW_OK;
  } catch (const hcwave::Error &e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc &) {
    last_error = "out of memory";
  } catch (const std::exception &e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return HCW_ERR_INTERNAL;
}

hcw_status null_argument(const char *what) {
  last_error = std::string("null argument: ") + what;
  return HCW_ERR_INVALID_ARGUMENT;
}

template <class Run>
hcw_status run_report(const hcw_config *cfg, const char *out_dir, hcw_report **out,
                      Run run) {
  if (!cfg) return null_argument("cfg");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    auto report = new hcw_report{run(cfg->config)};
    if (out_dir) {
      try {
        report->report.write(out_dir);
      } catch (...) {
        delete report;
        throw;
      }
    }
    *out = report;
  });
}

const hcwave::Table *table_at(const hcw_report *r, size_t table) {
  if (!r || table >= r->report.tables.size()) return nullptr;
  return &r->report.tables[table];
}

}  // namespace

extern "C" {

const char *hcw_version(void) { return "1.0.0"; }

const char *hcw_status_string(hcw_status status) {
  switch (status) {
    case HCW_OK: return "ok";
    case HCW_ERR_INVALID_ARGUMENT: return "invalid argument";
    case HCW_ERR_CONFIG: return "configuration error";
    case HCW_ERR_NUMERICAL: return "numerical failure";
    case HCW_ERR_IO: return "i/o error";
    case HCW_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char *hcw_last_error_message(void) { return last_error.c_str(); }

void hcw_set_warnings(int enabled) { hcwave::set_warnings_enabled(enabled != 0); }

hcw_status hcw_config_create(hcw_config **out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = new hcw_config{}; });
}

hcw_status hcw_config_load(const char *path, hcw_config **out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded(
      [&] { *out = new hcw_config{hcwave::ExperimentConfig::from_file(path)}; });
}

hcw_status hcw_config_parse(const char *text, hcw_config **out) {
  if (!text) return null_argument("text");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded(
      [&] { *out = new hcw_config{hcwave::ExperimentConfig::from_text(text)}; });
}

hcw_status hcw_config_set(hcw_config *cfg, const char *key, const char *value) {
  if (!cfg) return null_argument("cfg");
  if (!key) return null_argument("key");
  if (!value) return null_argument("value");
  return guarded([&] { cfg->config.set(key, value); });
}

hcw_status hcw_config_get(const hcw_config *cfg, const char *key, char *buffer,
                          size_t capacity, size_t *length) {
  if (!cfg) return null_argument("cfg");
  if (!key) return null_argument("key");
  return guarded([&] {
    const std::string v = cfg->config.get(key);
    if (length) *length = v.size();
    if (buffer && capacity > 0) {
      const size_t n = std::min(capacity - 1, v.size());
      std::memcpy(buffer, v.data(), n);
      buffer[n] = '\0';
    }
  });
}

void hcw_config_destroy(hcw_config *cfg) { delete cfg; }

hcw_status hcw_solve_fine(const hcw_config *cfg, const char *out_dir, hcw_report **out) {
  return run_report(cfg, out_dir, out, hcwave::run_solve_fine);
}

hcw_status hcw_hom_error(const hcw_config *cfg, const char *out_dir, hcw_report **out) {
  return run_report(cfg, out_dir, out, hcwave::run_homogenization_error);
}

hcw_status hcw_limit_1d(const hcw_config *cfg, const char *out_dir, hcw_report **out) {
  return run_report(cfg, out_dir, out, hcwave::run_highcontrast_limit);
}

hcw_status hcw_lod_converge(const hcw_config *cfg, const char *out_dir,
                            hcw_report **out) {
  return run_report(cfg, out_dir, out, hcwave::run_lod_convergence);
}

hcw_status hcw_homogenize(const hcw_config *cfg, int perforated, double tensor[4],
                          int *dim) {
  if (!cfg) return null_argument("cfg");
  if (!tensor) return null_argument("tensor");
  return guarded([&] {
    const hcwave::CellResult r = hcwave::run_homogenize(cfg->config, perforated != 0);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) tensor[2 * i + j] = r.tensor.entries(i, j);
    if (dim) *dim = r.tensor.dim;
  });
}

size_t hcw_report_table_count(const hcw_report *r) {
  return r ? r->report.tables.size() : 0;
}

const char *hcw_report_table_name(const hcw_report *r, size_t table) {
  const hcwave::Table *t = table_at(r, table);
  return t ? t->name.c_str() : nullptr;
}

size_t hcw_report_rows(const hcw_report *r, size_t table) {
  const hcwave::Table *t = table_at(r, table);
  return t ? t->rows.size() : 0;
}

size_t hcw_report_cols(const hcw_report *r, size_t table) {
  const hcwave::Table *t = table_at(r, table);
  return t ? t->columns.size() : 0;
}

const char *hcw_report_column_name(const hcw_report *r, size_t table, size_t col) {
  const hcwave::Table *t = table_at(r, table);
  return t && col < t->columns.size() ? t->columns[col].c_str() : nullptr;
}

const char *hcw_report_cell(const hcw_report *r, size_t table, size_t row, size_t col) {
  const hcwave::Table *t = table_at(r, table);
  if (!t || row >= t->rows.size() || col >= t->columns.size()) return nullptr;
  return t->rows[row][col].c_str();
}

hcw_status hcw_report_cell_double(const hcw_report *r, size_t table, size_t row,
                                  size_t col, double *value) {
  if (!value) return null_argument("value");
  const char *cell = hcw_report_cell(r, table, row, col);
  if (!cell) {
    last_error = "report cell out of range";
    return HCW_ERR_INVALID_ARGUMENT;
  }
  char *end = nullptr;
  const double v = std::strtod(cell, &end);
  if (end == cell || *end != '\0') {
    last_error = std::string("report cell '") + cell + "' is not a number";
    return HCW_ERR_INVALID_ARGUMENT;
  }
  *value = v;
  last_error.clear();
  return HCW_OK;
}

hcw_status hcw_report_write(const hcw_report *r, const char *out_dir) {
  if (!r) return null_argument("report");
  if (!out_dir) return null_argument("out_dir");
  return guarded([&] { r->report.write(out_dir); });
}

void hcw_report_destroy(hcw_report *r) { delete r; }

hcw_status hcw_harmonic_average_1d(double a0, double sigma_fraction, double *value) {
  if (!value) return null_argument("value");
  return guarded([&] { *value = hcwave::harmonic_average_1d(a0, sigma_fraction); });
}

hcw_status hcw_estimate_rate(const double *H, const double *errors, size_t n,
                             double *rate) {
  if (!H) return null_argument("H");
  if (!errors) return null_argument("errors");
  if (!rate) return null_argument("rate");
  return guarded([&] {
    *rate = hcwave::estimate_rate(std::vector<double>(H, H + n),
                                  std::vector<double>(errors, errors + n));
  });
}

}  // extern "C"
