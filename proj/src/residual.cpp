#include "gradsym/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

namespace gradsym {

namespace {

ResidualLevel residual_level(const SpaceTimeFn& u, const PdeSpec& pde, const ResidualGrid& g, int n, int stride,
                             std::string& first_excluded) {
  const int d = pde.dim;
  const auto& J = pde.jet();
  std::vector<Symbol> vars{J.t()};
  for (int a = 0; a < d; ++a) vars.push_back(J.x(a));
  vars.push_back(J.u());
  for (int o = 1; o <= 2; ++o)
    for (Symbol s : J.coords(o)) vars.push_back(s);
  Expr res = residual_expr(pde);
  for (Symbol s : res.free_symbols())
    if (std::find(vars.begin(), vars.end(), s) == vars.end())
      throw InvalidArgument("residual depends on an unassigned symbol " + s.name());
  CompiledExpr R(res, vars);

  const double dt = (g.t1 - g.t0) / (n - 1);
  std::vector<double> h(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) h[static_cast<std::size_t>(a)] = (g.hi[static_cast<std::size_t>(a)] - g.lo[static_cast<std::size_t>(a)]) / (n - 1);
  const int ny = d == 2 ? n : 1;
  const std::size_t plane = static_cast<std::size_t>(n) * static_cast<std::size_t>(ny);
  std::vector<double> vals(plane * static_cast<std::size_t>(n));
  auto idx = [&](int k, int i, int j) { return static_cast<std::size_t>(k) * plane + static_cast<std::size_t>(i + n * j); };
  const double nan = std::numeric_limits<double>::quiet_NaN();
  double x[2];
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < n; ++i) {
        x[0] = g.lo[0] + h[0] * i;
        if (d == 2) x[1] = g.lo[1] + h[1] * j;
        double v;
        try {
          v = u(g.t0 + dt * k, std::span<const double>(x, static_cast<std::size_t>(d)));
        } catch (const DomainError&) {
          v = nan;
        }
        vals[idx(k, i, j)] = v;
      }

  ResidualLevel lv;
  lv.dt = dt;
  lv.h = d == 2 ? std::max(h[0], h[1]) : h[0];
  std::vector<double> p(vars.size());
  const int jlo = d == 2 ? 1 : 0, jhi = d == 2 ? n - 1 : 1;
  for (int k = 1; k < n - 1; ++k)
    for (int j = jlo; j < jhi; ++j)
      for (int i = 1; i < n - 1; ++i) {
        auto U = [&](int dk, int di, int dj) { return vals[idx(k + dk, i + di, j + dj)]; };
        std::size_t c = 0;
        p[c++] = g.t0 + dt * k;
        p[c++] = g.lo[0] + h[0] * i;
        if (d == 2) p[c++] = g.lo[1] + h[1] * j;
        double u0 = U(0, 0, 0);
        p[c++] = u0;
        double ut = (U(1, 0, 0) - U(-1, 0, 0)) / (2 * dt);
        // coords(1) lists u_t then the space derivatives; coords(2) the
        // symmetric second derivatives in lexicographic order.
        auto first = [&](int a) {
          if (a == 0) return ut;
          if (a == 1) return (U(0, 1, 0) - U(0, -1, 0)) / (2 * h[0]);
          return (U(0, 0, 1) - U(0, 0, -1)) / (2 * h[1]);
        };
        auto delta = [&](int a, int s) -> std::array<int, 3> {
          std::array<int, 3> o{0, 0, 0};
          o[static_cast<std::size_t>(a)] = s;
          return o;
        };
        auto step = [&](int a) { return a == 0 ? dt : h[static_cast<std::size_t>(a - 1)]; };
        auto second = [&](int a, int b) {
          if (a == b) {
            auto f = delta(a, 1), m = delta(a, -1);
            return (U(f[0], f[1], f[2]) - 2 * u0 + U(m[0], m[1], m[2])) / (step(a) * step(a));
          }
          std::array<int, 3> pp{0, 0, 0}, pm{0, 0, 0}, mp{0, 0, 0}, mm{0, 0, 0};
          pp[static_cast<std::size_t>(a)] = 1; pp[static_cast<std::size_t>(b)] = 1;
          pm[static_cast<std::size_t>(a)] = 1; pm[static_cast<std::size_t>(b)] = -1;
          mp[static_cast<std::size_t>(a)] = -1; mp[static_cast<std::size_t>(b)] = 1;
          mm[static_cast<std::size_t>(a)] = -1; mm[static_cast<std::size_t>(b)] = -1;
          return (U(pp[0], pp[1], pp[2]) - U(pm[0], pm[1], pm[2]) - U(mp[0], mp[1], mp[2]) + U(mm[0], mm[1], mm[2])) /
                 (4 * step(a) * step(b));
        };
        for (int a = 0; a <= d; ++a) p[c++] = first(a);
        for (int a = 0; a <= d; ++a)
          for (int b = a; b <= d; ++b) p[c++] = second(a, b);

        double r = nan;
        bool ok = true;
        for (double v : p)
          if (!std::isfinite(v)) ok = false;
        if (ok) {
          try {
            r = R(p);
          } catch (const DomainError&) {
            ok = false;
          }
        }
        if (!ok || !std::isfinite(r)) {
          ++lv.excluded;
          if (first_excluded.empty()) {
            char buf[128];
            if (d == 2)
              std::snprintf(buf, sizeof buf, "t=%.6g x1=%.6g x2=%.6g", p[0], p[1], p[2]);
            else
              std::snprintf(buf, sizeof buf, "t=%.6g x=%.6g", p[0], p[1]);
            first_excluded = buf;
          }
          continue;
        }
        ++lv.points;
        lv.max_residual_all = std::max(lv.max_residual_all, std::fabs(r));
        if (k % stride == 0 && i % stride == 0 && j % stride == 0)
          lv.max_residual = std::max(lv.max_residual, std::fabs(r));
      }
  return lv;
}

}  // namespace

ResidualReport pde_residual_fd(const SpaceTimeFn& u, const PdeSpec& pde, const ResidualGrid& g) {
  if (g.lo.size() != static_cast<std::size_t>(pde.dim) || g.hi.size() != g.lo.size())
    throw InvalidArgument("residual grid extents do not match the dimension");
  if (g.n < 5) throw InvalidArgument("residual grid needs at least 5 points per axis");
  if (g.refine < 0) throw InvalidArgument("refinement count must be non-negative");
  if (!(g.t1 > g.t0)) throw InvalidArgument("residual grid needs t1 > t0");
  for (std::size_t a = 0; a < g.lo.size(); ++a)
    if (!(g.hi[a] > g.lo[a])) throw InvalidArgument("residual grid needs hi > lo");
  ResidualReport rep;
  int n = g.n;
  for (int l = 0, stride = 1; l <= g.refine; ++l, stride *= 2) {
    rep.levels.push_back(residual_level(u, pde, g, n, stride, rep.first_excluded));
    n = 2 * n - 1;
  }
  for (std::size_t l = 0; l + 1 < rep.levels.size(); ++l)
    rep.ratios.push_back(rep.levels[l].max_residual / rep.levels[l + 1].max_residual);
  return rep;
}

}  // namespace gradsym
