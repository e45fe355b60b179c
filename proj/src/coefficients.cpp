#include "hcwave/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "hcwave/error.hpp"

namespace hcwave {

namespace {

/// Whether x is an integer multiple of unit, for dyadic values.
bool divides(double unit, double x) {
  const double q = x / unit;
  return std::abs(q - std::round(q)) <= 1e-9 * std::max(1.0, std::abs(q));
}

void check_eps(double eps) {
  require(eps > 0.0 && eps <= 1.0, "eps must lie in (0, 1]");
  require(divides(eps, 1.0), "eps must divide the unit interval (use 2^-k)");
}

}  // namespace

double Coefficient::min_value() const {
  return *std::min_element(values.begin(), values.end());
}

double Coefficient::max_value() const {
  return *std::max_element(values.begin(), values.end());
}

Coefficient periodic_inclusion(const TensorMesh &fine, double eps, double a0) {
  check_eps(eps);
  require(a0 > 0.0, "a0 must be positive");
  if (!divides(fine.h(), eps / 4.0)) {
    std::ostringstream os;
    os << "periodic coefficient: fine mesh size h=" << fine.h()
       << " must divide eps/4=" << eps / 4.0
       << " so that inclusion boundaries align with fine elements";
    fail(ErrorKind::invalid_argument, os.str());
  }
  Coefficient c;
  c.mesh = fine;
  c.eps = eps;
  c.a0 = a0;
  c.kind = CoefficientKind::periodic;
  c.values.resize(fine.element_count());
  for (Index e = 0; e < fine.element_count(); ++e) {
    const Point x = fine.element_midpoint(e);
    bool inside = true;
    for (int d = 0; d < fine.dim(); ++d) {
      const double y = x[d] / eps - std::floor(x[d] / eps);
      inside = inside && y > 0.25 && y <= 0.75;
    }
    c.values[e] = inside ? a0 : 1.0;
  }
  return c;
}

Coefficient random_checkerboard(const TensorMesh &fine, double eps, double a0,
                                std::uint64_t seed, const Box &region) {
  check_eps(eps);
  require(a0 > 0.0, "a0 must be positive");
  if (!divides(fine.h(), eps)) {
    std::ostringstream os;
    os << "random checkerboard: fine mesh size h=" << fine.h()
       << " must divide eps=" << eps;
    fail(ErrorKind::invalid_argument, os.str());
  }
  GridCoord lo{0, 0}, hi{0, 0};  // eps-cell range [lo, hi)
  for (int d = 0; d < fine.dim(); ++d) {
    require(divides(eps, region.lo[d]) && divides(eps, region.hi[d]),
            "random checkerboard: region boundaries must align with eps-cells");
    require(region.lo[d] >= 0.0 && region.hi[d] <= 1.0 &&
                region.lo[d] <= region.hi[d],
            "random checkerboard: region must be a box inside the unit domain");
    lo[d] = static_cast<int>(std::lround(region.lo[d] / eps));
    hi[d] = static_cast<int>(std::lround(region.hi[d] / eps));
  }
  if (fine.dim() == 1) hi[1] = 1;

  const int cells = static_cast<int>(std::lround(1.0 / eps));
  std::vector<double> cell_value(
      static_cast<std::size_t>(fine.dim() == 2 ? cells * cells : cells), 1.0);
  SplitMix64 rng(seed);
  for (int j = lo[1]; j < hi[1]; ++j)
    for (int i = lo[0]; i < hi[0]; ++i)
      cell_value[static_cast<std::size_t>(i + cells * j)] = rng.coin() ? a0 : 1.0;

  Coefficient c;
  c.mesh = fine;
  c.eps = eps;
  c.a0 = a0;
  c.kind = CoefficientKind::random_checkerboard;
  c.values.resize(fine.element_count());
  const int per_cell = static_cast<int>(std::lround(eps / fine.h()));
  for (Index e = 0; e < fine.element_count(); ++e) {
    const GridCoord ec = fine.element_coord(e);
    const int ci = ec[0] / per_cell;
    const int cj = fine.dim() == 2 ? ec[1] / per_cell : 0;
    c.values[e] = cell_value[static_cast<std::size_t>(ci + cells * cj)];
  }
  return c;
}

Coefficient constant_coefficient(const TensorMesh &mesh, double value) {
  require(value > 0.0, "coefficient value must be positive");
  Coefficient c;
  c.mesh = mesh;
  c.a0 = value;
  c.kind = CoefficientKind::constant;
  c.values.assign(mesh.element_count(), value);
  return c;
}

Coefficient coefficient_from_values(const TensorMesh &mesh,
                                    std::vector<double> values) {
  require(static_cast<Index>(values.size()) == mesh.element_count(),
          "coefficient needs one value per element");
  for (double v : values) require(v > 0.0, "coefficient values must be positive");
  Coefficient c;
  c.mesh = mesh;
  c.values = std::move(values);
  c.a0 = c.min_value();
  c.kind = CoefficientKind::constant;
  return c;
}

Coefficient centered_inclusion(const TensorMesh &cell_mesh, double side,
                               double a0) {
  require(side >= 0.0 && side <= 1.0, "inclusion side must lie in [0, 1]");
  require(a0 > 0.0, "a0 must be positive");
  const double lo = 0.5 - 0.5 * side;
  const double hi = 0.5 + 0.5 * side;
  require(divides(cell_mesh.h(), lo),
          "cell mesh must align with the inclusion boundary");
  Coefficient c;
  c.mesh = cell_mesh;
  c.eps = 1.0;
  c.a0 = a0;
  c.kind = CoefficientKind::periodic;
  c.values.resize(cell_mesh.element_count());
  for (Index e = 0; e < cell_mesh.element_count(); ++e) {
    const Point x = cell_mesh.element_midpoint(e);
    bool inside = true;
    for (int d = 0; d < cell_mesh.dim(); ++d)
      inside = inside && x[d] > lo && x[d] < hi;
    c.values[e] = inside ? a0 : 1.0;
  }
  return c;
}

double high_contrast_value(double eps, double p) {
  require(eps > 0.0 && eps <= 1.0, "eps must lie in (0, 1]");
  require(p >= 0.0, "contrast exponent must be non-negative");
  return std::pow(eps, p);
}

void write_coefficient_csv(std::ostream &os, const Coefficient &coeff) {
  os << "element_index,value\n";
  os.precision(17);
  for (std::size_t e = 0; e < coeff.values.size(); ++e)
    os << e << ',' << coeff.values[e] << '\n';
}

}  // namespace hcwave
