#include "gradsym/reduce.hpp"

#include <boost/math/tools/roots.hpp>
// pchip.hpp relies on isnan being declared before it.
#include <boost/math/interpolators/pchip.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace gradsym {

namespace {

double bracketed_root(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if (!(flo * fhi < 0)) throw DomainError("value not attained on the bracket");
  std::uintmax_t iters = 200;
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                                  boost::math::tools::eps_tolerance<double>(52), iters);
  return a + (b - a) / 2;
}

}  // namespace

Hodograph1d hodograph_1d(const Expr& Q) {
  const auto& J = JetSpace::one();
  Expr ux(J.coord({J.x(0)})), uxx(J.coord({J.x(0), J.x(0)}));
  Hodograph1d h;
  h.Q = Q;
  h.source = PdeSpec::quasilinear(pow(ux, Expr(-2)), Q);
  Expr Qx = substitute(Q, {{J.u(), Expr(J.x(0))}});
  h.linear = PdeSpec::general(1, uxx - Qx * ux);
  return h;
}

Expr hodograph_pullback(const Hodograph1d& h, const Expr& w) {
  const auto& J = JetSpace::one();
  Symbol t = J.t(), u = J.u();
  Expr wt = diff(w, t), wu = diff(w, u), wuu = diff(wu, u);
  return substitute(residual_expr(h.source), {{J.x(0), w},
                                              {J.coord({t}), -wt / wu},
                                              {J.coord({J.x(0)}), Expr(1) / wu},
                                              {J.coord({J.x(0), J.x(0)}), -wuu / pow(wu, Expr(3))}});
}

std::function<double(double, double)> invert_closed_form(const Expr& w, double u_lo, double u_hi) {
  const auto& J = JetSpace::one();
  for (Symbol s : w.free_symbols())
    if (!(s == J.t()) && !(s == J.u())) throw InvalidArgument("w must depend on t and u only: " + w.str());
  CompiledExpr f(w, {J.t(), J.u()});
  return [f, u_lo, u_hi](double t, double x) {
    return bracketed_root(
        [&](double u) {
          double v[2] = {t, u};
          return f(v) - x;
        },
        u_lo, u_hi);
  };
}

std::function<double(double, double)> invert_grid(std::function<std::vector<double>(double)> w_samples,
                                                  std::vector<double> u_grid) {
  if (u_grid.size() < 4) throw InvalidArgument("inversion needs at least four samples");
  for (std::size_t i = 1; i < u_grid.size(); ++i)
    if (!(u_grid[i] > u_grid[i - 1])) throw InvalidArgument("u grid must be increasing");
  return [w_samples = std::move(w_samples), u_grid = std::move(u_grid)](double t, double x) {
    std::vector<double> ws = w_samples(t);
    if (ws.size() != u_grid.size()) throw InvalidArgument("sample count does not match the u grid");
    for (std::size_t i = 1; i < ws.size(); ++i)
      if (!(ws[i] > ws[i - 1])) throw InvalidArgument("w is not strictly increasing in u; cannot invert");
    if (x < ws.front() || x > ws.back()) throw DomainError("x outside the sampled range of w");
    std::vector<double> us = u_grid;
    boost::math::interpolators::pchip<std::vector<double>> p(std::move(ws), std::move(us));
    return p(x);
  };
}

RadialHodograph radial_hodograph() {
  const auto& J = JetSpace::one();
  return {radial_reduce(Scalar(-1)), PdeSpec::general(1, -Expr(J.coord({J.x(0), J.x(0)})))};
}

Expr radial_hodograph_pullback(const Expr& V) {
  const auto& J = JetSpace::one();
  Symbol t = J.t(), z = J.x(0);
  // r(t, z) = sqrt(V); U is the inverse of r in z.
  Expr r = sqrt(V);
  Expr rt = diff(r, t), rz = diff(r, z), rzz = diff(rz, z);
  RadialPde rad = radial_reduce(Scalar(-1));
  return substitute(residual_expr(rad.pde), {{z, r},
                                             {J.u(), Expr(z)},
                                             {J.coord({t}), -rt / rz},
                                             {J.coord({z}), Expr(1) / rz},
                                             {J.coord({z, z}), -rzz / pow(rz, Expr(3))}});
}

std::function<double(double, double)> radial_hodograph_solution(std::function<double(double, double)> V,
                                                                double z_lo, double z_hi) {
  return [V = std::move(V), z_lo, z_hi](double t, double r) {
    if (!(r > 0)) throw DomainError("r must be positive");
    return bracketed_root([&](double z) { return V(t, z) - r * r; }, z_lo, z_hi);
  };
}

std::vector<Theorem1Example> theorem1_examples() {
  JetSpace::one();
  return {{Expr(0), parse("u^2 + 2*t"), 0.5, 2.0},
          {Expr(0), parse("u^3 + 6*t*u"), 0.5, 2.0},
          {Expr(0), parse("exp(t)*(exp(u) - exp(-u))/2"), 0.2, 2.0},
          {parse("u"), parse("exp(-t)*u"), 0.5, 2.0},
          {parse("u"), parse("exp(-2*t)*(u^2 - 1)"), 0.5, 2.0},
          {parse("u"), parse("exp(-3*t)*(u^3 - 3*u)"), 1.2, 2.5}};
}

InversionCheck theorem1_inversion_check(const Theorem1Example& e, int n, int refine) {
  const auto& J = JetSpace::one();
  CompiledExpr w(e.w, {J.t(), J.u()});
  double pad = 0.1 * (e.u_hi - e.u_lo);
  InversionCheck out;
  out.x_lo = -std::numeric_limits<double>::infinity();
  out.x_hi = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 10; ++i) {
    double t = e.t0 + (e.t1 - e.t0) * i / 10;
    double lo[2] = {t, e.u_lo + pad}, hi[2] = {t, e.u_hi - pad};
    out.x_lo = std::max(out.x_lo, w(lo));
    out.x_hi = std::min(out.x_hi, w(hi));
  }
  if (!(out.x_hi > out.x_lo)) throw DomainError("no x window is covered on [" + std::to_string(e.t0) + ", " +
                                                std::to_string(e.t1) + "] for w = " + e.w.str());
  auto u = invert_closed_form(e.w, e.u_lo, e.u_hi);
  SpaceTimeFn f = [u](double t, std::span<const double> x) { return u(t, x[0]); };
  out.fd = pde_residual_fd(f, hodograph_1d(e.Q).source, ResidualGrid{e.t0, e.t1, {out.x_lo}, {out.x_hi}, n, refine});
  return out;
}

}  // namespace gradsym
