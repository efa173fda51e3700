#pragma once

#include "gradsym/pde.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace gradsym {

/// u(t, x) with x of length 1 or 2.
using SpaceTimeFn = std::function<double(double, std::span<const double>)>;

enum class Boundary { NeumannZeroFlux, Dirichlet };

/// Uniform grid values at one time level. Index i runs along x (or x1) and is
/// fastest; j runs along x2.
struct GridField {
  int dim = 1;
  std::vector<double> lo;
  std::vector<double> h;
  std::vector<int> n;
  double t = 0;
  std::vector<double> values;
  Boundary bc = Boundary::NeumannZeroFlux;
  /// Boundary values for Dirichlet grids.
  SpaceTimeFn dirichlet;

  /// Samples f on n points per axis covering [lo, hi].
  static GridField sample(int dim, std::vector<double> lo, std::vector<double> hi, std::vector<int> n, double t,
                          const SpaceTimeFn& f, Boundary bc = Boundary::NeumannZeroFlux);
  /// Throws InvalidArgument unless spacing is positive and extents are >= 3.
  void validate() const;

  std::size_t size() const { return values.size(); }
  double x(int axis, int i) const { return lo[static_cast<std::size_t>(axis)] + h[static_cast<std::size_t>(axis)] * i; }
  std::size_t index(int i, int j = 0) const { return static_cast<std::size_t>(i + n[0] * j); }
  double& at(int i, int j = 0) { return values[index(i, j)]; }
  double at(int i, int j = 0) const { return values[index(i, j)]; }
  double sum() const;
  double min() const;
  double max() const;
  /// Sum of values times the cell volume.
  double mass() const;
  /// Rows "x value" or "x1 x2 value", tab separated.
  std::string profile() const;
};

struct SolveStats {
  long steps = 0;
  /// Evaluations where Omega (or u_x^2) was clamped below by the floor.
  long clamped = 0;
  double dt_min = 0;
};

struct SolveOptions {
  double safety = 0.4;
  double omega_floor = 1e-12;
  /// Aborts with an Error when the step would fall below this.
  double dt_floor = 1e-14;
  /// Called after every step.
  std::function<void(const GridField&)> observer;
};

/// Explicit Euler in time, centered differences in space, for any 1-D equation
/// u_t = F(t, x, u, u_x, u_xx); dt = safety h^2 / max |dF/du_xx|.
GridField solve_pde_1d(const PdeSpec& pde, GridField init, double T, const SolveOptions& opts = {},
                       SolveStats* stats = nullptr);
/// Conservative flux form of u_t = div(D(W) grad u) + Q(u);
/// dt = safety h^2 / (4 max(D, D + 2 W D')).
GridField solve_pde_2d(const PdeSpec& pde, GridField init, double T, const SolveOptions& opts = {},
                       SolveStats* stats = nullptr);
/// U_t = (1/r)(r D(U_r^2) U_r)_r on [r0, R]; r0 = 0 uses the symmetric ghost
/// point, the outer end is zero flux (or Dirichlet).
GridField solve_radial(const Expr& D, GridField init, double T, const SolveOptions& opts = {},
                       SolveStats* stats = nullptr);

struct Trajectory {
  std::vector<double> s;
  std::vector<std::vector<double>> y;
  /// Local error estimate of each accepted step (size s.size() - 1).
  std::vector<double> err;
  bool complete = false;
  std::string diagnostic;
};

using OdeRhs = std::function<void(double, std::span<const double>, std::span<double>)>;

/// Embedded Cash-Karp 5(4) pair with step control on the max-norm local error.
Trajectory integrate_ode(const OdeRhs& f, std::vector<double> y0, double s0, double s1, double tol = 1e-9);

struct ResidualGrid {
  double t0 = 0, t1 = 1;
  std::vector<double> lo, hi;
  /// Points per axis (time included) on the coarsest level.
  int n = 17;
  /// Number of halvings after the coarsest level.
  int refine = 1;
};

struct ResidualLevel {
  double h = 0;
  double dt = 0;
  /// Max over the interior nodes of the coarsest level, present on every level.
  double max_residual = 0;
  /// Max over all interior nodes of this level.
  double max_residual_all = 0;
  long points = 0;
  long excluded = 0;
};

struct ResidualReport {
  std::vector<ResidualLevel> levels;
  /// max_residual(level i) / max_residual(level i + 1).
  std::vector<double> ratios;
  std::string first_excluded;
};

/// Centered second-order residual u_t - F at interior space-time points.
/// Points whose stencil leaves the candidate's domain are excluded.
ResidualReport pde_residual_fd(const SpaceTimeFn& u, const PdeSpec& pde, const ResidualGrid& g);

struct TransportResult {
  SpaceTimeFn u;
  /// Invariance residual of X against the equation.
  double invariance_residual = 0;
};

/// u~(p) for the image of the graph of u under exp(eps X): p is flowed back
/// and the group action applied to u. Throws InvalidArgument when X is not
/// admitted; evaluation throws DomainError when a flow blows up.
TransportResult transport_solution(const SpaceTimeFn& u, const VectorField& X, double eps, const PdeSpec& pde,
                                   const SamplerConfig& cfg = {});

/// Reads binary PGM (P5, maxval 255) scaled to [0, 1] on a unit-spaced grid.
GridField read_pgm(const std::string& path);
GridField parse_pgm(const std::string& bytes);
/// Writes values clamped to [0, 1] and rounded to bytes.
void write_pgm(const GridField& g, const std::string& path);
std::string encode_pgm(const GridField& g);

enum class PmModel { Exponential, Rational, Linear };
PmModel pm_model(const std::string& name);
/// exp(-W/D0), (1 + W/D0)^-1 or 1.
Expr pm_diffusivity(PmModel m, const Scalar& D0);

struct FilterStats {
  double mass_before = 0, mass_after = 0;
  double relative_mass_change = 0;
  double min_before = 0, max_before = 0, min_after = 0, max_after = 0;
  bool max_principle = false;
  long steps = 0;
};

GridField perona_malik_filter(const GridField& image, PmModel model, const Scalar& D0, double T,
                              double safety = 0.4, FilterStats* stats = nullptr);

}  // namespace gradsym
