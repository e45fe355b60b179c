#include "hcwave/mesh.hpp"

#include <algorithm>
#include <string>

#include "hcwave/error.hpp"

namespace hcwave {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

Index ipow(Index base, int exponent) {
  Index r = 1;
  for (int i = 0; i < exponent; ++i) r *= base;
  return r;
}

}  // namespace

TensorMesh::TensorMesh(int dim, int cells_per_axis)
    : dim_(dim), n_(cells_per_axis) {
  require(dim == 1 || dim == 2,
          "mesh dimension must be 1 or 2, got " + std::to_string(dim));
  require(cells_per_axis >= 1 && is_power_of_two(cells_per_axis),
          "cells per axis must be a power of two, got " +
              std::to_string(cells_per_axis));
}

Index TensorMesh::node_count() const { return ipow(n_ + 1, dim_); }
Index TensorMesh::element_count() const { return ipow(n_, dim_); }
Index TensorMesh::interior_node_count() const { return ipow(n_ - 1, dim_); }

GridCoord TensorMesh::node_coord(Index node) const {
  if (dim_ == 1) return {static_cast<int>(node), 0};
  return {static_cast<int>(node % (n_ + 1)), static_cast<int>(node / (n_ + 1))};
}

GridCoord TensorMesh::element_coord(Index element) const {
  if (dim_ == 1) return {static_cast<int>(element), 0};
  return {static_cast<int>(element % n_), static_cast<int>(element / n_)};
}

Index TensorMesh::node_index(GridCoord c) const {
  return dim_ == 1 ? c[0] : c[0] + static_cast<Index>(n_ + 1) * c[1];
}

Index TensorMesh::element_index(GridCoord c) const {
  return dim_ == 1 ? c[0] : c[0] + static_cast<Index>(n_) * c[1];
}

Point TensorMesh::node_point(Index node) const {
  const GridCoord c = node_coord(node);
  return {c[0] * h(), dim_ == 2 ? c[1] * h() : 0.0};
}

Point TensorMesh::element_midpoint(Index element) const {
  const GridCoord c = element_coord(element);
  return {(c[0] + 0.5) * h(), dim_ == 2 ? (c[1] + 0.5) * h() : 0.0};
}

std::array<Index, 4> TensorMesh::element_nodes(Index element) const {
  const GridCoord c = element_coord(element);
  std::array<Index, 4> nodes{-1, -1, -1, -1};
  for (int a = 0; a < nodes_per_element(); ++a)
    nodes[a] = node_index({c[0] + (a & 1), c[1] + (a >> 1)});
  return nodes;
}

Index TensorMesh::dof_of_node(Index node) const {
  const GridCoord c = node_coord(node);
  for (int d = 0; d < dim_; ++d)
    if (c[d] == 0 || c[d] == n_) return -1;
  if (dim_ == 1) return c[0] - 1;
  return (c[0] - 1) + static_cast<Index>(n_ - 1) * (c[1] - 1);
}

Index TensorMesh::node_of_dof(Index dof) const {
  if (dim_ == 1) return dof + 1;
  const int i = static_cast<int>(dof % (n_ - 1)) + 1;
  const int j = static_cast<int>(dof / (n_ - 1)) + 1;
  return node_index({i, j});
}

TensorMesh build_mesh(int dim, int cells_per_axis) {
  require(cells_per_axis >= 2, "cells per axis must be at least 2");
  return TensorMesh(dim, cells_per_axis);
}

int refinement_ratio(const TensorMesh &coarse, const TensorMesh &fine) {
  require(coarse.dim() == fine.dim(), "coarse and fine meshes differ in dimension");
  if (fine.cells_per_axis() % coarse.cells_per_axis() != 0)
    fail(ErrorKind::invalid_argument,
         "fine resolution " + std::to_string(fine.cells_per_axis()) +
             " is not a refinement of coarse resolution " +
             std::to_string(coarse.cells_per_axis()));
  return fine.cells_per_axis() / coarse.cells_per_axis();
}

std::vector<std::vector<Index>> refinement_map(const TensorMesh &coarse,
                                               const TensorMesh &fine) {
  const int r = refinement_ratio(coarse, fine);
  std::vector<std::vector<Index>> map(coarse.element_count());
  for (Index k = 0; k < coarse.element_count(); ++k) {
    const GridCoord c = coarse.element_coord(k);
    const int ny = coarse.dim() == 2 ? r : 1;
    map[k].reserve(static_cast<std::size_t>(r) * ny);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < r; ++i)
        map[k].push_back(fine.element_index({c[0] * r + i, c[1] * r + j}));
  }
  return map;
}

bool Patch::contains_element(GridCoord c) const {
  return c[0] >= lo[0] && c[0] <= hi[0] && c[1] >= lo[1] && c[1] <= hi[1];
}

Patch build_patch(const TensorMesh &coarse, Index element, int m) {
  require(element >= 0 && element < coarse.element_count(),
          "patch center element out of range");
  require(m >= 0, "patch layer count must be non-negative");
  const GridCoord c = coarse.element_coord(element);
  const int n = coarse.cells_per_axis();
  Patch p;
  p.center_element = element;
  p.m = m;
  for (int d = 0; d < 2; ++d) {
    if (d >= coarse.dim()) {
      p.lo[d] = p.hi[d] = 0;
      continue;
    }
    // Vertex adjacency grows a box by one element per side and layer.
    p.lo[d] = std::max(0, c[d] - m);
    p.hi[d] = std::min(n - 1, c[d] + m);
    if (p.lo[d] != c[d] - m || p.hi[d] != c[d] + m) p.boundary_clipped = true;
  }
  for (int j = p.lo[1]; j <= p.hi[1]; ++j)
    for (int i = p.lo[0]; i <= p.hi[0]; ++i)
      p.elements.push_back(coarse.element_index({i, j}));
  return p;
}

Patch build_patch(const TensorMesh &coarse, const TensorMesh &fine,
                  Index element, int m) {
  Patch p = build_patch(coarse, element, m);
  const int r = refinement_ratio(coarse, fine);
  const int n = fine.cells_per_axis();
  GridCoord lo{0, 0}, hi{0, 0};
  for (int d = 0; d < coarse.dim(); ++d) {
    // Strictly inside the patch box and away from the domain boundary.
    lo[d] = std::max(1, p.lo[d] * r + 1);
    hi[d] = std::min(n - 1, (p.hi[d] + 1) * r - 1);
  }
  for (int j = lo[1]; j <= hi[1]; ++j)
    for (int i = lo[0]; i <= hi[0]; ++i)
      p.fine_dofs.push_back(fine.dof_of_node(fine.node_index({i, j})));
  return p;
}

}  // namespace hcwave
