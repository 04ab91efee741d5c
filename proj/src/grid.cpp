#include "phisolve/grid.hpp"

#include <cmath>

namespace phisolve {

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> xs(static_cast<size_t>(n));
  const double h = (b - a) / (n - 1);
  for (int i = 0; i < n; ++i) xs[static_cast<size_t>(i)] = a + h * i;
  xs.back() = b;  // exact endpoint
  return xs;
}

}  // namespace

MeshPtr Mesh::make_1d(double a, double b, int n) {
  if (n < 3) fail(ErrorCode::InvalidMeshSpec, "need at least 3 nodes per axis");
  if (!(b > a)) fail(ErrorCode::InvalidMeshSpec, "degenerate extent");
  auto mesh = std::shared_ptr<Mesh>(new Mesh());
  mesh->dim_ = 1;
  mesh->nx_ = n;
  mesh->ax_ = a;
  mesh->bx_ = b;
  mesh->hx_ = (b - a) / (n - 1);
  mesh->xs_ = linspace(a, b, n);
  return mesh;
}

MeshPtr Mesh::make_2d(double ax, double bx, int nx, double ay, double by,
                      int ny) {
  if (nx < 3 || ny < 3)
    fail(ErrorCode::InvalidMeshSpec, "need at least 3 nodes per axis");
  if (!(bx > ax) || !(by > ay))
    fail(ErrorCode::InvalidMeshSpec, "degenerate extent");
  auto mesh = std::shared_ptr<Mesh>(new Mesh());
  mesh->dim_ = 2;
  mesh->nx_ = nx;
  mesh->ny_ = ny;
  mesh->ax_ = ax;
  mesh->bx_ = bx;
  mesh->ay_ = ay;
  mesh->by_ = by;
  mesh->hx_ = (bx - ax) / (nx - 1);
  mesh->hy_ = (by - ay) / (ny - 1);
  mesh->xs_ = linspace(ax, bx, nx);
  mesh->ys_ = linspace(ay, by, ny);
  return mesh;
}

bool Mesh::is_boundary(int idx) const {
  if (dim_ == 1) return idx == 0 || idx == nx_ - 1;
  const int i = idx % nx_, j = idx / nx_;
  return i == 0 || i == nx_ - 1 || j == 0 || j == ny_ - 1;
}

double Mesh::weight(int idx) const {
  const int i = dim_ == 1 ? idx : idx % nx_;
  double w = hx_ * ((i == 0 || i == nx_ - 1) ? 0.5 : 1.0);
  if (dim_ == 2) {
    const int j = idx / nx_;
    w *= hy_ * ((j == 0 || j == ny_ - 1) ? 0.5 : 1.0);
  }
  return w;
}

double Mesh::measure() const {
  return dim_ == 1 ? (bx_ - ax_) : (bx_ - ax_) * (by_ - ay_);
}

double Mesh::min_extent() const {
  return dim_ == 1 ? (bx_ - ax_) : std::min(bx_ - ax_, by_ - ay_);
}

double Mesh::boundary_distance(int idx) const {
  const double px = x(idx);
  double d = std::min(px - ax_, bx_ - px);
  if (dim_ == 2) {
    const double py = y(idx);
    d = std::min(d, std::min(py - ay_, by_ - py));
  }
  return std::max(d, 0.0);
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

double GridFunction::max_interior() const {
  double m = 0.0;
  for (int i = 0; i < size(); ++i)
    if (!mesh->is_boundary(i)) m = std::max(m, v[static_cast<size_t>(i)]);
  return m;
}

double GridFunction::max_boundary_abs() const {
  double m = 0.0;
  for (int i = 0; i < size(); ++i)
    if (mesh->is_boundary(i))
      m = std::max(m, std::fabs(v[static_cast<size_t>(i)]));
  return m;
}

GridFunction make_grid_function(
    const MeshPtr& mesh, const std::function<double(double, double)>& f) {
  GridFunction u(mesh);
  for (int i = 0; i < u.size(); ++i) u[i] = f(mesh->x(i), mesh->y(i));
  return u;
}

DistanceField distance_field(const MeshPtr& mesh) {
  DistanceField df;
  df.d = GridFunction(mesh);
  for (int i = 0; i < df.d.size(); ++i) df.d[i] = mesh->boundary_distance(i);
  df.delta = mesh->min_extent() / 6.0;
  return df;
}

double integrate(const GridFunction& u) {
  double s = 0.0;
  for (int i = 0; i < u.size(); ++i) s += u.mesh->weight(i) * u[i];
  return s;
}

FaceGradients staggered_gradient(const GridFunction& u) {
  const Mesh& m = *u.mesh;
  FaceGradients fg;
  if (m.dim() == 1) {
    fg.gx.resize(static_cast<size_t>(m.nx() - 1));
    for (int i = 0; i + 1 < m.nx(); ++i)
      fg.gx[static_cast<size_t>(i)] = (u[i + 1] - u[i]) / m.hx();
    return fg;
  }
  fg.gx.resize(static_cast<size_t>((m.nx() - 1) * m.ny()));
  fg.gy.resize(static_cast<size_t>(m.nx() * (m.ny() - 1)));
  for (int j = 0; j < m.ny(); ++j)
    for (int i = 0; i + 1 < m.nx(); ++i)
      fg.gx[static_cast<size_t>(i + (m.nx() - 1) * j)] =
          (u[m.index(i + 1, j)] - u[m.index(i, j)]) / m.hx();
  for (int j = 0; j + 1 < m.ny(); ++j)
    for (int i = 0; i < m.nx(); ++i)
      fg.gy[static_cast<size_t>(i + m.nx() * j)] =
          (u[m.index(i, j + 1)] - u[m.index(i, j)]) / m.hy();
  return fg;
}

}  // namespace phisolve
