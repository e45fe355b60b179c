#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace hcwave {

using Index = std::int64_t;
using Point = std::array<double, 2>;
using GridCoord = std::array<int, 2>;

/// Uniform axis-aligned grid on (0,1)^dim, dim in {1,2}.
///
/// Nodes and elements are numbered lexicographically with axis 0 fastest.
/// Degrees of freedom are the interior nodes, numbered the same way over the
/// (n-1)^dim interior grid. No coordinates are stored; everything derives
/// from indices and h.
class TensorMesh {
 public:
  TensorMesh(int dim, int cells_per_axis);

  int dim() const { return dim_; }
  int cells_per_axis() const { return n_; }
  double h() const { return 1.0 / n_; }

  Index node_count() const;
  Index element_count() const;
  Index interior_node_count() const;
  int nodes_per_element() const { return dim_ == 1 ? 2 : 4; }

  GridCoord node_coord(Index node) const;
  GridCoord element_coord(Index element) const;
  Index node_index(GridCoord c) const;
  Index element_index(GridCoord c) const;

  Point node_point(Index node) const;
  Point element_midpoint(Index element) const;

  /// Local vertex a of an element: offset (a & 1, a >> 1).
  std::array<Index, 4> element_nodes(Index element) const;

  /// Interior dof of a node, or -1 on the boundary.
  Index dof_of_node(Index node) const;
  Index node_of_dof(Index dof) const;

  bool operator==(const TensorMesh &other) const = default;

 private:
  int dim_;
  int n_;
};

TensorMesh build_mesh(int dim, int cells_per_axis);

/// Coarse element -> fine elements it contains (lexicographic order).
std::vector<std::vector<Index>> refinement_map(const TensorMesh &coarse,
                                               const TensorMesh &fine);

/// Ratio fine.cells_per_axis / coarse.cells_per_axis; throws if incompatible.
int refinement_ratio(const TensorMesh &coarse, const TensorMesh &fine);

/// Element patch U_m(K). Always an axis-aligned box of coarse elements,
/// lo..hi inclusive in element coordinates.
struct Patch {
  Index center_element = 0;
  int m = 0;
  GridCoord lo{0, 0};
  GridCoord hi{0, 0};
  std::vector<Index> elements;
  /// Fine interior dofs strictly inside the patch (filled when a fine mesh
  /// is supplied).
  std::vector<Index> fine_dofs;
  bool boundary_clipped = false;

  bool contains_element(GridCoord c) const;
};

Patch build_patch(const TensorMesh &coarse, Index element, int m);
Patch build_patch(const TensorMesh &coarse, const TensorMesh &fine,
                  Index element, int m);

}  // namespace hcwave
