#include "hcwave/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "hcwave/error.hpp"

namespace hcwave {

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string &text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

[[noreturn]] void bad_value(const std::string &key, const std::string &value,
                            const std::string &why) {
  fail(ErrorKind::config, "config key '" + key + "' = '" + value + "': " + why);
}

bool parse_bool(const std::string &key, const std::string &v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v, "expected true or false");
}

void expect_choice(const std::string &key, const std::string &v,
                   std::initializer_list<const char *> choices) {
  std::string all;
  for (const char *c : choices) {
    if (v == c) return;
    all += all.empty() ? c : std::string(", ") + c;
  }
  bad_value(key, v, "expected one of " + all);
}

/// eps^p or a plain number; returns p (or NaN for a plain number).
bool parse_eps_power(const std::string &v, double &p) {
  if (v.rfind("eps^", 0) != 0) return false;
  p = parse_number(v.substr(4));
  return true;
}

struct KeySpec {
  const char *name;
  const char *default_value;
  std::function<void(const std::string &, const std::string &)> check;
};

void check_positive(const std::string &k, const std::string &v) {
  if (!(parse_number(v) > 0.0)) bad_value(k, v, "must be positive");
}

void check_positive_list(const std::string &k, const std::string &v) {
  for (double x : parse_number_list(v))
    if (!(x > 0.0)) bad_value(k, v, "entries must be positive");
}

void check_int_list(const std::string &k, const std::string &v) {
  for (double x : parse_number_list(v))
    if (x < 0.0 || x != std::floor(x)) bad_value(k, v, "entries must be non-negative integers");
}

void check_a0(const std::string &k, const std::string &v) {
  double p = 0.0;
  if (parse_eps_power(v, p)) {
    if (p < 0.0) bad_value(k, v, "exponent must be non-negative");
    return;
  }
  check_positive(k, v);
}

const std::vector<KeySpec> &key_specs() {
  static const std::vector<KeySpec> specs = {
      {"dim", "1",
       [](const std::string &k, const std::string &v) {
         if (v != "1" && v != "2") bad_value(k, v, "expected 1 or 2");
       }},
      {"fine.h", "2^-8", check_positive},
      {"time.tau", "2^-7", [](const std::string &k, const std::string &v) {
         if (parse_number(v) == 0.0) bad_value(k, v, "must be nonzero");
       }},
      {"time.T", "0.25", [](const std::string &k, const std::string &v) {
         if (parse_number(v) < 0.0) bad_value(k, v, "must be non-negative");
       }},
      {"time.scheme", "midpoint",
       [](const std::string &k, const std::string &v) {
         expect_choice(k, v, {"midpoint", "crank_nicolson"});
       }},
      {"time.literal_mass_load", "false",
       [](const std::string &k, const std::string &v) { parse_bool(k, v); }},
      {"coeff.kind", "periodic",
       [](const std::string &k, const std::string &v) {
         expect_choice(k, v, {"periodic", "random", "constant"});
       }},
      {"coeff.eps", "2^-4", check_positive},
      {"coeff.a0", "eps^2", check_a0},
      {"coeff.seed", "1",
       [](const std::string &k, const std::string &v) {
         try {
           std::size_t used = 0;
           std::stoull(v, &used);
           if (used != v.size() || v.front() == '-') throw std::invalid_argument(v);
         } catch (const std::exception &) {
           bad_value(k, v, "expected an unsigned 64-bit integer");
         }
       }},
      {"coeff.region", "0,1",
       [](const std::string &k, const std::string &v) {
         const auto x = parse_number_list(v);
         if (x.size() != 2 && x.size() != 4) bad_value(k, v, "expected lo,hi or xlo,xhi,ylo,yhi");
         for (std::size_t i = 0; i + 1 < x.size(); i += 2)
           if (!(x[i] <= x[i + 1]) || x[i] < 0.0 || x[i + 1] > 1.0)
             bad_value(k, v, "each interval must satisfy 0 <= lo <= hi <= 1");
       }},
      {"field.u0", "zero", [](const std::string &, const std::string &v) { parse_field(v); }},
      {"field.v0", "zero", [](const std::string &, const std::string &v) { parse_field(v); }},
      {"field.f", "poly_bubble", [](const std::string &, const std::string &v) { parse_field(v); }},
      {"lod.H_list", "2^-2,2^-3,2^-4", check_positive_list},
      {"lod.k_list", "3", check_int_list},
      {"lod.interpolation", "standard",
       [](const std::string &k, const std::string &v) {
         expect_choice(k, v, {"standard", "weighted"});
       }},
      {"lod.formulation", "galerkin",
       [](const std::string &k, const std::string &v) {
         expect_choice(k, v, {"galerkin", "petrov_galerkin"});
       }},
      {"lod.v0_projection", "elliptic",
       [](const std::string &k, const std::string &v) {
         expect_choice(k, v, {"elliptic", "l2"});
       }},
      {"norms", "l2,weighted_l2,energy",
       [](const std::string &k, const std::string &v) {
         const auto items = split_list(v);
         if (items.empty()) bad_value(k, v, "at least one norm required");
         for (const auto &n : items) expect_choice(k, n, {"l2", "weighted_l2", "energy"});
       }},
      {"hom.eps_list", "2^-3,2^-4,2^-5,2^-6", check_positive_list},
      {"hom.a0_list", "2^-2", check_positive_list},
      {"cell.cells", "64", check_positive},
      {"cell.side", "0.5", [](const std::string &k, const std::string &v) {
         const double s = parse_number(v);
         if (s < 0.0 || s > 1.0) bad_value(k, v, "must lie in [0, 1]");
       }},
      {"cell.perforated", "false",
       [](const std::string &k, const std::string &v) { parse_bool(k, v); }},
      {"limit.p_list", "0,2,3",
       [](const std::string &k, const std::string &v) {
         for (double p : parse_number_list(v))
           if (p < 0.0) bad_value(k, v, "exponents must be non-negative");
       }},
      {"output.snapshot_times", "",
       [](const std::string &k, const std::string &v) {
         for (double t : parse_number_list(v))
           if (t < 0.0) bad_value(k, v, "times must be non-negative");
       }},
      {"output.dump_operators", "false",
       [](const std::string &k, const std::string &v) { parse_bool(k, v); }},
      {"threads", "1", check_positive},
  };
  return specs;
}

const KeySpec *find_spec(const std::string &key) {
  for (const KeySpec &s : key_specs())
    if (key == s.name) return &s;
  return nullptr;
}

}  // namespace

double parse_number(const std::string &text) {
  const std::string s = trim(text);
  if (s.empty()) fail(ErrorKind::config, "empty number");
  auto plain = [&](const std::string &part) {
    try {
      std::size_t used = 0;
      const double v = std::stod(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
      return v;
    } catch (const std::exception &) {
      fail(ErrorKind::config, "malformed number '" + s + "'");
    }
  };
  const auto caret = s.find('^');
  if (caret != std::string::npos)
    return std::pow(plain(trim(s.substr(0, caret))), plain(trim(s.substr(caret + 1))));
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    const double den = plain(trim(s.substr(slash + 1)));
    if (den == 0.0) fail(ErrorKind::config, "division by zero in '" + s + "'");
    return plain(trim(s.substr(0, slash))) / den;
  }
  return plain(s);
}

std::vector<double> parse_number_list(const std::string &text) {
  std::vector<double> out;
  for (const std::string &item : split_list(text)) out.push_back(parse_number(item));
  return out;
}

ExperimentConfig::ExperimentConfig() {
  for (const KeySpec &s : key_specs()) values_[s.name] = s.default_value;
}

void ExperimentConfig::set(const std::string &key, const std::string &value) {
  const KeySpec *spec = find_spec(trim(key));
  if (!spec) fail(ErrorKind::config, "unknown config key '" + trim(key) + "'");
  const std::string v = trim(value);
  spec->check(spec->name, v);
  values_[spec->name] = v;
}

std::string ExperimentConfig::get(const std::string &key) const {
  auto it = values_.find(key);
  if (it == values_.end()) fail(ErrorKind::config, "unknown config key '" + key + "'");
  return it->second;
}

bool ExperimentConfig::has_key(const std::string &key) const {
  return values_.count(key) != 0;
}

ExperimentConfig ExperimentConfig::from_text(const std::string &text) {
  ExperimentConfig config;
  std::stringstream ss(text);
  std::string line;
  int number = 0;
  while (std::getline(ss, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::config, "config line " + std::to_string(number) +
                                  ": expected key = value");
    try {
      config.set(line.substr(0, eq), line.substr(eq + 1));
    } catch (const Error &e) {
      fail(ErrorKind::config, "config line " + std::to_string(number) + ": " + e.what());
    }
  }
  return config;
}

ExperimentConfig ExperimentConfig::from_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

std::string ExperimentConfig::echo() const {
  std::string out;
  for (const auto &[k, v] : values_) {
    if (!out.empty()) out += "; ";
    out += k + "=" + v;
  }
  return out;
}

double Settings::a0(double eps_value) const {
  double p = 0.0;
  if (parse_eps_power(a0_spec, p)) return high_contrast_value(eps_value, p);
  return parse_number(a0_spec);
}

int cells_for(double h, const char *what) {
  require(h > 0.0 && h <= 0.5, std::string(what) + " must lie in (0, 1/2]");
  const double n = 1.0 / h;
  const double rounded = std::round(n);
  const long long ni = static_cast<long long>(rounded);
  if (std::abs(n - rounded) > 1e-9 * n || (ni & (ni - 1)) != 0)
    fail(ErrorKind::config, std::string(what) + " must be 2^-j");
  return static_cast<int>(ni);
}

Settings settings(const ExperimentConfig &config) {
  Settings s;
  auto num = [&](const char *k) { return parse_number(config.get(k)); };
  s.dim = static_cast<int>(num("dim"));
  s.fine_h = num("fine.h");
  s.tau = num("time.tau");
  s.final_time = num("time.T");
  s.step.scheme = config.get("time.scheme") == "crank_nicolson" ? Scheme::crank_nicolson
                                                                 : Scheme::midpoint;
  s.step.literal_mass_load = parse_bool("time.literal_mass_load",
                                        config.get("time.literal_mass_load"));
  const std::string kind = config.get("coeff.kind");
  s.coeff_kind = kind == "random"     ? CoefficientKind::random_checkerboard
                 : kind == "constant" ? CoefficientKind::constant
                                      : CoefficientKind::periodic;
  s.eps = num("coeff.eps");
  s.a0_spec = config.get("coeff.a0");
  s.seed = std::stoull(config.get("coeff.seed"));
  const auto region = parse_number_list(config.get("coeff.region"));
  if (region.size() == 2) {
    s.region = {{region[0], region[0]}, {region[1], region[1]}};
  } else {
    s.region = {{region[0], region[2]}, {region[1], region[3]}};
  }
  s.u0 = parse_field(config.get("field.u0"));
  s.v0 = parse_field(config.get("field.v0"));
  s.f = parse_field(config.get("field.f"));
  s.H_list = parse_number_list(config.get("lod.H_list"));
  for (double k : parse_number_list(config.get("lod.k_list")))
    s.k_list.push_back(static_cast<int>(k));
  s.weighted_interpolation = config.get("lod.interpolation") == "weighted";
  s.formulation = config.get("lod.formulation") == "petrov_galerkin"
                      ? Formulation::petrov_galerkin
                      : Formulation::galerkin;
  s.v0_elliptic = config.get("lod.v0_projection") == "elliptic";
  s.norms = split_list(config.get("norms"));
  s.hom_eps_list = parse_number_list(config.get("hom.eps_list"));
  s.hom_a0_list = parse_number_list(config.get("hom.a0_list"));
  s.cell_cells = static_cast<int>(num("cell.cells"));
  s.cell_side = num("cell.side");
  s.perforated = parse_bool("cell.perforated", config.get("cell.perforated"));
  s.p_list = parse_number_list(config.get("limit.p_list"));
  s.snapshot_times = parse_number_list(config.get("output.snapshot_times"));
  s.dump_operators = parse_bool("output.dump_operators", config.get("output.dump_operators"));
  s.threads = std::max(1, static_cast<int>(num("threads")));
  return s;
}

}  // namespace hcwave
