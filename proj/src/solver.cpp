#include "gradsym/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace gradsym {

namespace {

void require_symbols(const Expr& e, const std::vector<Symbol>& allowed, const char* what) {
  for (Symbol s : e.free_symbols())
    if (std::find(allowed.begin(), allowed.end(), s) == allowed.end())
      throw InvalidArgument(std::string(what) + " depends on an unassigned symbol " + s.name());
}

double step_size(double dmax, double h2, double safety, double remaining, const SolveOptions& opts, double t) {
  if (!std::isfinite(dmax)) throw Error("effective diffusivity is not finite at t = " + std::to_string(t));
  double dt = dmax > 0 ? safety * h2 / dmax : remaining;
  if (dt >= remaining) return remaining;
  if (dt < opts.dt_floor)
    throw Error("time step collapsed to " + std::to_string(dt) + " at t = " + std::to_string(t) +
                " (effective diffusivity " + std::to_string(dmax) + ")");
  return dt;
}

void record(SolveStats* stats, double dt) {
  if (!stats) return;
  ++stats->steps;
  if (stats->dt_min == 0 || dt < stats->dt_min) stats->dt_min = dt;
}

}  // namespace

GridField solve_pde_1d(const PdeSpec& pde, GridField g, double T, const SolveOptions& opts, SolveStats* stats) {
  if (pde.dim != 1) throw InvalidArgument("solve_pde_1d needs a 1-D equation");
  if (g.dim != 1) throw InvalidArgument("solve_pde_1d needs a 1-D grid");
  g.validate();
  const auto& J = pde.jet();
  Symbol ux = J.coord({J.x(0)}), uxx = J.coord({J.x(0), J.x(0)});
  std::vector<Symbol> vars{J.t(), J.x(0), J.u(), ux, uxx};
  Expr F = pde.right_side();
  require_symbols(F, vars, "right side");
  CompiledExpr rhs(F, vars), deff(diff(F, uxx), vars);

  const int n = g.n[0];
  const double h = g.h[0];
  const bool dir = g.bc == Boundary::Dirichlet;
  const double floor = std::sqrt(opts.omega_floor);
  std::vector<double> f(static_cast<std::size_t>(n)), next(g.values.size());
  while (g.t < T) {
    double dmax = 0;
    const auto& u = g.values;
    for (int i = dir ? 1 : 0; i < (dir ? n - 1 : n); ++i) {
      double ul = i > 0 ? u[static_cast<std::size_t>(i - 1)] : u[1];
      double ur = i < n - 1 ? u[static_cast<std::size_t>(i + 1)] : u[static_cast<std::size_t>(n - 2)];
      double uc = u[static_cast<std::size_t>(i)];
      double p = (ur - ul) / (2 * h);
      if (std::fabs(p) < floor) {
        p = p < 0 ? -floor : floor;
        if (stats) ++stats->clamped;
      }
      double v[5] = {g.t, g.x(0, i), uc, p, (ur - 2 * uc + ul) / (h * h)};
      double fi = rhs(v);
      double di = std::fabs(deff(v));
      if (!std::isfinite(fi)) throw Error("right side is not finite at x = " + std::to_string(v[1]));
      f[static_cast<std::size_t>(i)] = fi;
      dmax = std::max(dmax, di);
    }
    double dt = step_size(dmax, h * h, opts.safety, T - g.t, opts, g.t);
    for (int i = 0; i < n; ++i) next[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)] + dt * f[static_cast<std::size_t>(i)];
    g.t = dt == T - g.t ? T : g.t + dt;
    if (dir) {
      double x0 = g.x(0, 0), x1 = g.x(0, n - 1);
      next[0] = g.dirichlet(g.t, std::span<const double>(&x0, 1));
      next[static_cast<std::size_t>(n - 1)] = g.dirichlet(g.t, std::span<const double>(&x1, 1));
    }
    g.values.swap(next);
    record(stats, dt);
    if (opts.observer) opts.observer(g);
  }
  return g;
}

GridField solve_pde_2d(const PdeSpec& pde, GridField g, double T, const SolveOptions& opts, SolveStats* stats) {
  if (pde.form != PdeForm::Divergence) throw InvalidArgument("solve_pde_2d needs the divergence form");
  if (g.dim != 2) throw InvalidArgument("solve_pde_2d needs a 2-D grid");
  g.validate();
  const auto& J = pde.jet();
  Symbol W = omega_symbol();
  require_symbols(pde.D, {W}, "D");
  std::vector<Symbol> qvars{J.t(), J.x(0), J.x(1), J.u()};
  require_symbols(pde.Q, qvars, "Q");
  CompiledExpr D(pde.D, {W}), Dp(diff(pde.D, W), {W}), Q(pde.Q, qvars);
  const bool has_q = !pde.Q.is_zero();

  const int nx = g.n[0], ny = g.n[1];
  const double hx = g.h[0], hy = g.h[1];
  const bool dir = g.bc == Boundary::Dirichlet;
  // Faces: fx(i, j) between (i, j) and (i+1, j); fy(i, j) between (i, j) and (i, j+1).
  std::vector<double> fx(static_cast<std::size_t>(nx * ny), 0.0), fy(fx.size(), 0.0), next(g.values.size());

  auto flux = [&](double p, double q, double& dmax) {
    double w = p * p + q * q;
    if (w < opts.omega_floor) {
      w = opts.omega_floor;
      if (stats) ++stats->clamped;
    }
    double d[1] = {w};
    double dv = D(d);
    double de = dv + 2 * w * Dp(d);
    dmax = std::max({dmax, std::fabs(dv), std::fabs(de)});
    return dv * p;
  };

  while (g.t < T) {
    const auto& u = g.values;
    auto U = [&](int i, int j) {
      // Cell-centered mirror outside the grid.
      i = std::clamp(i, 0, nx - 1);
      j = std::clamp(j, 0, ny - 1);
      return u[g.index(i, j)];
    };
    double dmax = 0;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i + 1 < nx; ++i) {
        double p = (U(i + 1, j) - U(i, j)) / hx;
        double q = (U(i, j + 1) - U(i, j - 1) + U(i + 1, j + 1) - U(i + 1, j - 1)) / (4 * hy);
        fx[g.index(i, j)] = flux(p, q, dmax);
      }
    for (int j = 0; j + 1 < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        double q = (U(i, j + 1) - U(i, j)) / hy;
        double p = (U(i + 1, j) - U(i - 1, j) + U(i + 1, j + 1) - U(i - 1, j + 1)) / (4 * hx);
        fy[g.index(i, j)] = flux(q, p, dmax);
      }
    double h2 = std::min(hx, hy) * std::min(hx, hy);
    double dt = step_size(4 * dmax, h2, opts.safety, T - g.t, opts, g.t);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        double div = ((i + 1 < nx ? fx[g.index(i, j)] : 0.0) - (i > 0 ? fx[g.index(i - 1, j)] : 0.0)) / hx +
                     ((j + 1 < ny ? fy[g.index(i, j)] : 0.0) - (j > 0 ? fy[g.index(i, j - 1)] : 0.0)) / hy;
        double src = 0;
        if (has_q) {
          double v[4] = {g.t, g.x(0, i), g.x(1, j), u[g.index(i, j)]};
          src = Q(v);
        }
        double val = u[g.index(i, j)] + dt * (div + src);
        if (!std::isfinite(val)) throw Error("solution is not finite at t = " + std::to_string(g.t));
        next[g.index(i, j)] = val;
      }
    g.t = dt == T - g.t ? T : g.t + dt;
    if (dir) {
      double x[2];
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          if (i != 0 && j != 0 && i != nx - 1 && j != ny - 1) continue;
          x[0] = g.x(0, i);
          x[1] = g.x(1, j);
          next[g.index(i, j)] = g.dirichlet(g.t, std::span<const double>(x, 2));
        }
    }
    g.values.swap(next);
    record(stats, dt);
    if (opts.observer) opts.observer(g);
  }
  return g;
}

GridField solve_radial(const Expr& Dexpr, GridField g, double T, const SolveOptions& opts, SolveStats* stats) {
  if (g.dim != 1) throw InvalidArgument("solve_radial needs a 1-D grid in r");
  g.validate();
  if (g.lo[0] < 0) throw InvalidArgument("radial grid must start at r >= 0");
  Symbol W = omega_symbol();
  require_symbols(Dexpr, {W}, "D");
  CompiledExpr D(Dexpr, {W}), Dp(diff(Dexpr, W), {W});
  const int n = g.n[0];
  const double h = g.h[0];
  const bool dir = g.bc == Boundary::Dirichlet;
  const bool axis = g.lo[0] == 0;
  std::vector<double> F(static_cast<std::size_t>(n), 0.0), next(g.values.size());
  while (g.t < T) {
    const auto& u = g.values;
    double dmax = 0;
    for (int i = 0; i + 1 < n; ++i) {
      double p = (u[static_cast<std::size_t>(i + 1)] - u[static_cast<std::size_t>(i)]) / h;
      double w = p * p;
      if (w < opts.omega_floor) {
        w = opts.omega_floor;
        if (stats) ++stats->clamped;
      }
      double d[1] = {w};
      double dv = D(d);
      dmax = std::max({dmax, std::fabs(dv), std::fabs(dv + 2 * w * Dp(d))});
      F[static_cast<std::size_t>(i)] = dv * p;
    }
    double dt = step_size(2 * dmax, h * h, opts.safety, T - g.t, opts, g.t);
    for (int i = 0; i < n; ++i) {
      double r = g.x(0, i);
      double rate;
      if (i == 0 && axis) {
        rate = 4 * F[0] / h;
      } else {
        double rp = r + h / 2, rm = r - h / 2;
        double out = i + 1 < n ? rp * F[static_cast<std::size_t>(i)] : 0.0;
        double in = i > 0 ? rm * F[static_cast<std::size_t>(i - 1)] : 0.0;
        rate = (out - in) / (r * h);
      }
      next[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)] + dt * rate;
    }
    g.t = dt == T - g.t ? T : g.t + dt;
    if (dir) {
      double x0 = g.x(0, 0), x1 = g.x(0, n - 1);
      if (!axis) next[0] = g.dirichlet(g.t, std::span<const double>(&x0, 1));
      next[static_cast<std::size_t>(n - 1)] = g.dirichlet(g.t, std::span<const double>(&x1, 1));
    }
    g.values.swap(next);
    record(stats, dt);
    if (opts.observer) opts.observer(g);
  }
  return g;
}

}  // namespace gradsym
