#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <vector>

#include "phisolve/errors.hpp"

namespace phisolve {

/// Uniform tensor mesh on an interval or axis-aligned rectangle with
/// trapezoidal quadrature weights. Immutable after construction.
class Mesh {
 public:
  static std::shared_ptr<const Mesh> make_1d(double a, double b, int n);
  static std::shared_ptr<const Mesh> make_2d(double ax, double bx, int nx,
                                             double ay, double by, int ny);

  int dim() const { return dim_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int node_count() const { return dim_ == 1 ? nx_ : nx_ * ny_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  double max_h() const { return dim_ == 1 ? hx_ : std::max(hx_, hy_); }
  double ax() const { return ax_; }
  double bx() const { return bx_; }
  double ay() const { return ay_; }
  double by() const { return by_; }

  double x(int idx) const { return xs_[dim_ == 1 ? idx : idx % nx_]; }
  double y(int idx) const { return dim_ == 1 ? 0.0 : ys_[idx / nx_]; }
  int index(int i, int j = 0) const { return dim_ == 1 ? i : i + nx_ * j; }

  bool is_boundary(int idx) const;
  double weight(int idx) const;

  /// Total measure |Omega|; weights sum to this exactly up to rounding.
  double measure() const;
  double min_extent() const;

  /// Exact Euclidean distance to the boundary (closed form for boxes).
  double boundary_distance(int idx) const;

 private:
  Mesh() = default;
  int dim_ = 1;
  int nx_ = 0, ny_ = 0;
  double ax_ = 0, bx_ = 1, ay_ = 0, by_ = 1;
  double hx_ = 0, hy_ = 0;
  std::vector<double> xs_, ys_;
};

using MeshPtr = std::shared_ptr<const Mesh>;

/// Sampled values on a mesh. Value semantics; cheap to copy for desk-scale
/// node counts.
struct GridFunction {
  MeshPtr mesh;
  std::vector<double> v;

  GridFunction() = default;
  explicit GridFunction(MeshPtr m, double fill = 0.0)
      : mesh(std::move(m)), v(mesh->node_count(), fill) {}

  double& operator[](int i) { return v[i]; }
  double operator[](int i) const { return v[i]; }
  int size() const { return static_cast<int>(v.size()); }

  double max_abs() const;
  double max_interior() const;

  /// Largest |u| over boundary nodes; 0 for Dirichlet-tagged data.
  double max_boundary_abs() const;
};

GridFunction make_grid_function(const MeshPtr& mesh,
                                const std::function<double(double, double)>& f);

struct DistanceField {
  GridFunction d;
  double delta;  // collar parameter; default one sixth of the shortest extent
};

DistanceField distance_field(const MeshPtr& mesh);

/// Quadrature-weighted sum: the discrete realization of the domain integral.
double integrate(const GridFunction& u);

/// Face-centered finite differences (u_{i+1} - u_i)/h per axis.
struct FaceGradients {
  std::vector<double> gx;  // (nx-1) * ny entries, x-faces
  std::vector<double> gy;  // nx * (ny-1) entries, y-faces (2-D only)
};

FaceGradients staggered_gradient(const GridFunction& u);

}  // namespace phisolve
