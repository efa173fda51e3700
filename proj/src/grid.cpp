#include "gradsym/numerics.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

namespace gradsym {

GridField GridField::sample(int dim, std::vector<double> lo, std::vector<double> hi, std::vector<int> n, double t,
                            const SpaceTimeFn& f, Boundary bc) {
  if (dim != 1 && dim != 2) throw InvalidArgument("grid dimension must be 1 or 2");
  if (lo.size() != static_cast<std::size_t>(dim) || hi.size() != lo.size() || n.size() != lo.size())
    throw InvalidArgument("grid extents do not match the dimension");
  GridField g;
  g.dim = dim;
  g.lo = lo;
  g.n = n;
  g.t = t;
  g.bc = bc;
  for (int a = 0; a < dim; ++a) {
    auto k = static_cast<std::size_t>(a);
    if (n[k] < 3) throw InvalidArgument("grid needs at least 3 points per axis");
    g.h.push_back((hi[k] - lo[k]) / (n[k] - 1));
  }
  if (bc == Boundary::Dirichlet) g.dirichlet = f;
  g.validate();
  int ny = dim == 2 ? n[1] : 1;
  g.values.resize(static_cast<std::size_t>(n[0]) * static_cast<std::size_t>(ny));
  double x[2];
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < n[0]; ++i) {
      x[0] = g.x(0, i);
      if (dim == 2) x[1] = g.x(1, j);
      g.at(i, j) = f(t, std::span<const double>(x, static_cast<std::size_t>(dim)));
    }
  return g;
}

void GridField::validate() const {
  if (dim != 1 && dim != 2) throw InvalidArgument("grid dimension must be 1 or 2");
  if (h.size() != static_cast<std::size_t>(dim) || n.size() != h.size() || lo.size() != h.size())
    throw InvalidArgument("grid extents do not match the dimension");
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) {
    auto k = static_cast<std::size_t>(a);
    if (!(h[k] > 0)) throw InvalidArgument("grid spacing must be positive");
    if (n[k] < 3) throw InvalidArgument("grid needs at least 3 points per axis");
    total *= static_cast<std::size_t>(n[k]);
  }
  if (!values.empty() && values.size() != total) throw InvalidArgument("grid value count does not match extents");
  if (bc == Boundary::Dirichlet && !dirichlet) throw InvalidArgument("Dirichlet grid without boundary function");
}

double GridField::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }
double GridField::min() const { return *std::min_element(values.begin(), values.end()); }
double GridField::max() const { return *std::max_element(values.begin(), values.end()); }

double GridField::mass() const {
  double v = sum();
  for (double s : h) v *= s;
  return v;
}

std::string GridField::profile() const {
  std::string out;
  char buf[96];
  int ny = dim == 2 ? n[1] : 1;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < n[0]; ++i) {
      if (dim == 1)
        std::snprintf(buf, sizeof buf, "%.12g\t%.15g\n", x(0, i), at(i));
      else
        std::snprintf(buf, sizeof buf, "%.12g\t%.12g\t%.15g\n", x(0, i), x(1, j), at(i, j));
      out += buf;
    }
  return out;
}

}  // namespace gradsym
