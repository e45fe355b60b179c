// Command-line front end; talks to the library only through the C API.

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "hcwave/hcwave.h"

namespace {

int report_failure(hcw_status s) {
  std::fprintf(stderr, "hcwave: %s: %s\n", hcw_status_string(s), hcw_last_error_message());
  return static_cast<int>(s);
}

void print_table(const hcw_report *r, const char *name) {
  for (size_t t = 0; t < hcw_report_table_count(r); ++t) {
    if (std::string(hcw_report_table_name(r, t)) != name) continue;
    const size_t cols = hcw_report_cols(r, t);
    for (size_t c = 0; c < cols; ++c)
      std::printf("%s%s", c ? "," : "", hcw_report_column_name(r, t, c));
    std::printf("\n");
    for (size_t row = 0; row < hcw_report_rows(r, t); ++row) {
      for (size_t c = 0; c < cols; ++c)
        std::printf("%s%s", c ? "," : "", hcw_report_cell(r, t, row, c));
      std::printf("\n");
    }
  }
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"High-contrast wave equation: fine FEM, homogenization and LOD"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  int threads = 0;
  std::string seed;
  std::vector<std::string> overrides;
  bool quiet = false;
  app.add_option("--config", config_path, "key = value configuration file")
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory for CSV files");
  app.add_option("--threads", threads, "worker threads for corrector problems")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "seed of the random checkerboard (u64)");
  app.add_option("--set", overrides, "override a config entry, key=value");
  app.add_flag("--quiet", quiet, "suppress warnings");

  auto *solve = app.add_subcommand("solve-fine", "fine-scale reference solve");
  auto *hom = app.add_subcommand("homogenize", "print the homogenized tensor as CSV");
  bool perforated = false;
  hom->add_flag("--perforated", perforated, "remove the inclusion from the cell");
  auto *hom_error = app.add_subcommand("hom-error", "homogenization error study");
  auto *limit = app.add_subcommand("limit-1d", "high-contrast limit study (1D)");
  auto *lod = app.add_subcommand("lod-converge", "LOD convergence study");

  CLI11_PARSE(app, argc, argv);
  hcw_set_warnings(quiet ? 0 : 1);

  hcw_config *cfg = nullptr;
  hcw_status s = config_path.empty() ? hcw_config_create(&cfg)
                                     : hcw_config_load(config_path.c_str(), &cfg);
  if (s != HCW_OK) return report_failure(s);
  auto set = [&](const std::string &key, const std::string &value) {
    return hcw_config_set(cfg, key.c_str(), value.c_str());
  };
  for (const std::string &kv : overrides) {
    const auto eq = kv.find('=');
    s = eq == std::string::npos ? HCW_ERR_CONFIG
                                : set(kv.substr(0, eq), kv.substr(eq + 1));
    if (s != HCW_OK) {
      if (eq == std::string::npos)
        std::fprintf(stderr, "hcwave: --set expects key=value, got '%s'\n", kv.c_str());
      else
        report_failure(s);
      hcw_config_destroy(cfg);
      return static_cast<int>(HCW_ERR_CONFIG);
    }
  }
  if (threads > 0 && (s = set("threads", std::to_string(threads))) != HCW_OK) {
    hcw_config_destroy(cfg);
    return report_failure(s);
  }
  if (!seed.empty() && (s = set("coeff.seed", seed)) != HCW_OK) {
    hcw_config_destroy(cfg);
    return report_failure(s);
  }

  int code = 0;
  if (*hom) {
    double t[4];
    int dim = 0;
    s = hcw_homogenize(cfg, perforated ? 1 : 0, t, &dim);
    if (s != HCW_OK) {
      code = report_failure(s);
    } else {
      std::printf("i,j,value\n");
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) std::printf("%d,%d,%.17g\n", i, j, t[2 * i + j]);
    }
  } else {
    hcw_report *r = nullptr;
    const char *summary = nullptr;
    if (*solve) {
      s = hcw_solve_fine(cfg, out_dir.c_str(), &r);
    } else if (*hom_error) {
      s = hcw_hom_error(cfg, out_dir.c_str(), &r);
      summary = "errors";
    } else if (*limit) {
      s = hcw_limit_1d(cfg, out_dir.c_str(), &r);
      summary = "limit_summary";
    } else if (*lod) {
      s = hcw_lod_converge(cfg, out_dir.c_str(), &r);
      summary = "rates";
    }
    if (s != HCW_OK) {
      code = report_failure(s);
    } else {
      if (summary) print_table(r, summary);
      std::fprintf(stderr, "hcwave: wrote %zu table(s) to %s\n", hcw_report_table_count(r),
                   out_dir.c_str());
    }
    hcw_report_destroy(r);
  }
  hcw_config_destroy(cfg);
  return code;
}
