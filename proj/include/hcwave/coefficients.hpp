#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hcwave/mesh.hpp"

namespace hcwave {

enum class CoefficientKind { periodic, random_checkerboard, constant };

/// Piecewise-constant scalar coefficient, one value per element of `mesh`.
struct Coefficient {
  TensorMesh mesh{1, 2};
  std::vector<double> values;
  double eps = 1.0;
  double a0 = 1.0;
  CoefficientKind kind = CoefficientKind::constant;

  double operator[](Index element) const { return values[element]; }
  double min_value() const;
  double max_value() const;
};

/// Axis-aligned box [lo, hi] per axis (unused axes ignored).
struct Box {
  Point lo{0.0, 0.0};
  Point hi{0.0, 0.0};

  static Box unit() { return {{0.0, 0.0}, {1.0, 1.0}}; }
  static Box empty() { return {{0.0, 0.0}, {0.0, 0.0}}; }
};

/// SplitMix64: fixed 64-bit counter-based generator, reproducible everywhere.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Bernoulli(1/2) from the most significant bit.
  bool coin() { return (next() >> 63) != 0; }

 private:
  std::uint64_t state_;
};

/// a = a0 where the element midpoint lies in the eps-periodic inclusion
/// (1/4, 3/4] (1D) or (1/4, 3/4)^2 (2D) of the unit cell, 1 elsewhere.
Coefficient periodic_inclusion(const TensorMesh &fine, double eps, double a0);

/// One coin per eps-cell inside `region` (lexicographic cell order, axis 0
/// fastest): heads -> a0, tails -> 1. Outside the region a = 1.
Coefficient random_checkerboard(const TensorMesh &fine, double eps, double a0,
                                std::uint64_t seed, const Box &region);

Coefficient constant_coefficient(const TensorMesh &mesh, double value);

/// Coefficient with explicit per-element values.
Coefficient coefficient_from_values(const TensorMesh &mesh,
                                    std::vector<double> values);

/// Unit-cell coefficient with a centered inclusion of the given side length
/// per axis (|inclusion| = side^dim).
Coefficient centered_inclusion(const TensorMesh &cell_mesh, double side,
                               double a0);

/// eps^p
double high_contrast_value(double eps, double p);

/// CSV: element_index,value
void write_coefficient_csv(std::ostream &os, const Coefficient &coeff);

}  // namespace hcwave
