#include "hcwave/fem.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "hcwave/error.hpp"

namespace hcwave {

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

template <typename ElementMatrix>
SparseMatrix assemble_interior(const TensorMesh &mesh, ElementMatrix &&local) {
  std::vector<Triplet> t;
  const int nb = mesh.nodes_per_element();
  t.reserve(static_cast<std::size_t>(mesh.element_count()) * nb * nb);
  for (Index e = 0; e < mesh.element_count(); ++e) {
    const DenseMatrix k = local(e);
    const auto nodes = mesh.element_nodes(e);
    for (int a = 0; a < nb; ++a) {
      const Index ra = mesh.dof_of_node(nodes[a]);
      if (ra < 0) continue;
      for (int b = 0; b < nb; ++b) {
        const Index cb = mesh.dof_of_node(nodes[b]);
        if (cb < 0) continue;
        t.emplace_back(static_cast<int>(ra), static_cast<int>(cb), k(a, b));
      }
    }
  }
  const Index n = mesh.interior_node_count();
  return from_triplets(n, n, t);
}

}  // namespace

double Field::operator()(const Point &x, int dim) const {
  switch (kind) {
    case FieldKind::zero:
      return 0.0;
    case FieldKind::constant:
      return params.at(0);
    case FieldKind::gaussian: {
      const double sigma = params.back();
      double r2 = 0.0;
      for (int d = 0; d < dim; ++d) {
        const double c = params.size() >= 3 ? params[d] : params[0];
        r2 += (x[d] - c) * (x[d] - c);
      }
      return std::exp(-r2 / (sigma * sigma));
    }
    case FieldKind::poly_bubble: {
      double v = 1.0;
      for (int d = 0; d < dim; ++d) v *= x[d] * (x[d] - 1.0);
      return v;
    }
    case FieldKind::sine: {
      double v = 1.0;
      for (int d = 0; d < dim; ++d) v *= std::sin(std::numbers::pi * x[d]);
      return v;
    }
    case FieldKind::outside_box: {
      const double lo = params.at(0), hi = params.at(1);
      const double value = params.size() > 2 ? params[2] : 1.0;
      bool inside = true;
      for (int d = 0; d < dim; ++d) inside = inside && x[d] > lo && x[d] < hi;
      return inside ? 0.0 : value;
    }
  }
  return 0.0;
}

Field parse_field(const std::string &text) {
  const std::string s = trim(text);
  std::string name = s;
  std::vector<double> params;
  const auto open = s.find('(');
  if (open != std::string::npos) {
    if (s.back() != ')')
      fail(ErrorKind::config, "field '" + s + "': missing closing parenthesis");
    name = trim(s.substr(0, open));
    std::stringstream args(s.substr(open + 1, s.size() - open - 2));
    std::string item;
    while (std::getline(args, item, ',')) {
      try {
        params.push_back(std::stod(trim(item)));
      } catch (const std::exception &) {
        fail(ErrorKind::config, "field '" + s + "': bad parameter '" + item + "'");
      }
    }
  }
  auto expect = [&](std::size_t lo, std::size_t hi) {
    if (params.size() < lo || params.size() > hi)
      fail(ErrorKind::config, "field '" + s + "': wrong number of parameters");
  };
  Field f;
  if (name == "zero") {
    expect(0, 0);
    f.kind = FieldKind::zero;
  } else if (name == "constant") {
    expect(1, 1);
    f.kind = FieldKind::constant;
  } else if (name == "gaussian") {
    if (params.empty()) params = {0.5, 0.1};
    expect(2, 3);
    f.kind = FieldKind::gaussian;
  } else if (name == "poly_bubble") {
    expect(0, 0);
    f.kind = FieldKind::poly_bubble;
  } else if (name == "sine") {
    expect(0, 0);
    f.kind = FieldKind::sine;
  } else if (name == "outside_box") {
    expect(2, 3);
    f.kind = FieldKind::outside_box;
  } else {
    fail(ErrorKind::config, "unknown field '" + name + "'");
  }
  f.params = params;
  return f;
}

std::string to_string(const Field &field) {
  static const char *names[] = {"zero",        "constant", "gaussian",
                                "poly_bubble", "sine",     "outside_box"};
  std::ostringstream os;
  os.precision(17);
  os << names[static_cast<int>(field.kind)];
  if (!field.params.empty()) {
    os << '(';
    for (std::size_t i = 0; i < field.params.size(); ++i)
      os << (i ? "," : "") << field.params[i];
    os << ')';
  }
  return os.str();
}

ReferenceElement reference_element(int dim, double h) {
  ReferenceElement ref;
  ref.dim = dim;
  ref.h = h;
  ref.functions = dim == 1 ? 2 : 4;
  ref.points = dim == 1 ? 2 : 4;
  const double g[2] = {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};
  const double jac = dim == 1 ? h : h * h;
  for (int q = 0; q < ref.points; ++q) {
    ref.reference_points.push_back({g[q & 1], dim == 2 ? g[q >> 1] : 0.0});
    ref.weights.push_back(jac / ref.points);
  }
  ref.values.resize(ref.points, ref.functions);
  for (int q = 0; q < ref.points; ++q) {
    const Point &p = ref.reference_points[q];
    DenseMatrix grad(ref.functions, dim);
    for (int a = 0; a < ref.functions; ++a) {
      const int ax = a & 1, ay = a >> 1;
      const double vx = ax ? p[0] : 1.0 - p[0];
      const double dx = (ax ? 1.0 : -1.0) / h;
      if (dim == 1) {
        ref.values(q, a) = vx;
        grad(a, 0) = dx;
      } else {
        const double vy = ay ? p[1] : 1.0 - p[1];
        const double dy = (ay ? 1.0 : -1.0) / h;
        ref.values(q, a) = vx * vy;
        grad(a, 0) = dx * vy;
        grad(a, 1) = vx * dy;
      }
    }
    ref.gradients.push_back(grad);
  }
  ref.stiffness = element_stiffness(ref, Eigen::Matrix2d::Identity());
  ref.mass = DenseMatrix::Zero(ref.functions, ref.functions);
  for (int q = 0; q < ref.points; ++q)
    ref.mass += ref.weights[q] * ref.values.row(q).transpose() * ref.values.row(q);
  return ref;
}

DenseMatrix element_stiffness(const ReferenceElement &ref,
                              const Eigen::Matrix2d &tensor) {
  const int d = ref.dim;
  const DenseMatrix k = tensor.topLeftCorner(d, d);
  DenseMatrix s = DenseMatrix::Zero(ref.functions, ref.functions);
  for (int q = 0; q < ref.points; ++q) {
    const DenseMatrix &g = ref.gradients[q];
    s += ref.weights[q] * g * k * g.transpose();
  }
  return s;
}

SparseMatrix assemble_stiffness(const TensorMesh &mesh, const Coefficient &coeff) {
  require(static_cast<Index>(coeff.values.size()) == mesh.element_count(),
          "stiffness: coefficient does not match the mesh");
  const ReferenceElement ref = reference_element(mesh.dim(), mesh.h());
  return assemble_interior(
      mesh, [&](Index e) -> DenseMatrix { return coeff.values[e] * ref.stiffness; });
}

SparseMatrix assemble_stiffness(const TensorMesh &mesh,
                                const Eigen::Matrix2d &tensor) {
  const ReferenceElement ref = reference_element(mesh.dim(), mesh.h());
  const DenseMatrix k = element_stiffness(ref, tensor);
  return assemble_interior(mesh, [&](Index) -> DenseMatrix { return k; });
}

SparseMatrix assemble_stiffness_all_nodes(const TensorMesh &mesh,
                                          const Coefficient &coeff) {
  const ReferenceElement ref = reference_element(mesh.dim(), mesh.h());
  std::vector<Triplet> t;
  const int nb = mesh.nodes_per_element();
  for (Index e = 0; e < mesh.element_count(); ++e) {
    const auto nodes = mesh.element_nodes(e);
    for (int a = 0; a < nb; ++a)
      for (int b = 0; b < nb; ++b)
        t.emplace_back(static_cast<int>(nodes[a]), static_cast<int>(nodes[b]),
                       coeff.values[e] * ref.stiffness(a, b));
  }
  return from_triplets(mesh.node_count(), mesh.node_count(), t);
}

SparseMatrix assemble_mass(const TensorMesh &mesh, const Coefficient *weight) {
  if (weight)
    require(static_cast<Index>(weight->values.size()) == mesh.element_count(),
            "mass: weight does not match the mesh");
  const ReferenceElement ref = reference_element(mesh.dim(), mesh.h());
  return assemble_interior(mesh, [&](Index e) -> DenseMatrix {
    return weight ? DenseMatrix(weight->values[e] * ref.mass) : ref.mass;
  });
}

Vector assemble_load(const TensorMesh &mesh, const Field &f, double time_scale) {
  Vector load = Vector::Zero(mesh.interior_node_count());
  if (f.kind == FieldKind::zero || time_scale == 0.0) return load;
  const ReferenceElement ref = reference_element(mesh.dim(), mesh.h());
  const double h = mesh.h();
  for (Index e = 0; e < mesh.element_count(); ++e) {
    const GridCoord c = mesh.element_coord(e);
    const auto nodes = mesh.element_nodes(e);
    for (int q = 0; q < ref.points; ++q) {
      const Point &p = ref.reference_points[q];
      const Point x{(c[0] + p[0]) * h, mesh.dim() == 2 ? (c[1] + p[1]) * h : 0.0};
      const double fw = time_scale * f(x, mesh.dim()) * ref.weights[q];
      for (int a = 0; a < ref.functions; ++a) {
        const Index dof = mesh.dof_of_node(nodes[a]);
        if (dof >= 0) load[dof] += fw * ref.values(q, a);
      }
    }
  }
  return load;
}

Vector interpolate_function(const TensorMesh &mesh,
                            const std::function<double(const Point &)> &f) {
  Vector v(mesh.interior_node_count());
  for (Index i = 0; i < v.size(); ++i) v[i] = f(mesh.node_point(mesh.node_of_dof(i)));
  return v;
}

Vector interpolate_field(const TensorMesh &mesh, const Field &f) {
  const int dim = mesh.dim();
  return interpolate_function(mesh, [&](const Point &x) { return f(x, dim); });
}

double quadratic_norm(const Vector &v, const SparseMatrix &m) {
  require(m.rows() == v.size() && m.cols() == v.size(),
          "norm: matrix and vector dimensions differ");
  const double q = v.dot(m * v);
  if (q < 0.0) {
    // Roundoff of a PSD form stays within a few ulps of sum |v_i m_ij v_j|.
    const Vector av = v.cwiseAbs();
    const double scale = av.dot(m.cwiseAbs() * av);
    if (q < -1e-14 * std::max(scale, 1e-300)) {
      std::ostringstream os;
      os << "norm: negative quadratic form " << q
         << " (matrix is not symmetric positive semidefinite)";
      fail(ErrorKind::numerical, os.str());
    }
    return 0.0;
  }
  return std::sqrt(q);
}

double norm_l2(const Vector &v, const SparseMatrix &mass) {
  return quadratic_norm(v, mass);
}

double norm_energy(const Vector &v, const SparseMatrix &stiffness) {
  return quadratic_norm(v, stiffness);
}

void write_field_csv(std::ostream &os, const TensorMesh &mesh, const Vector &dofs) {
  require(dofs.size() == mesh.interior_node_count(),
          "field dump: vector does not match the mesh");
  os << (mesh.dim() == 1 ? "node_index,x,value\n" : "node_index,x,y,value\n");
  os.precision(17);
  for (Index n = 0; n < mesh.node_count(); ++n) {
    const Point x = mesh.node_point(n);
    const Index dof = mesh.dof_of_node(n);
    os << n << ',' << x[0];
    if (mesh.dim() == 2) os << ',' << x[1];
    os << ',' << (dof >= 0 ? dofs[dof] : 0.0) << '\n';
  }
}

}  // namespace hcwave
