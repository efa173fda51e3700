#include "gradsym/pde.hpp"

namespace gradsym {

Symbol omega_symbol() {
  static const Symbol w = Symbol::intern("W", SymbolKind::Parameter);
  return w;
}

Symbol fn_D() {
  static const Symbol d = Symbol::intern("D", SymbolKind::Function);
  return d;
}

Symbol fn_Q() {
  static const Symbol q = Symbol::intern("Q", SymbolKind::Function);
  return q;
}

PdeSpec PdeSpec::quasilinear(Expr D, Expr Q) {
  PdeSpec p;
  p.dim = 1;
  p.form = PdeForm::Quasilinear;
  p.D = std::move(D);
  p.Q = std::move(Q);
  return p;
}

PdeSpec PdeSpec::divergence(Expr D, Expr Q) {
  PdeSpec p;
  p.dim = 2;
  p.form = PdeForm::Divergence;
  p.D = std::move(D);
  p.Q = std::move(Q);
  return p;
}

PdeSpec PdeSpec::general(int dim, Expr rhs) {
  PdeSpec p;
  p.dim = dim;
  p.form = PdeForm::General;
  p.rhs = std::move(rhs);
  return p;
}

PdeSpec PdeSpec::generic(int dim) {
  const auto& J = JetSpace::of_dim(dim);
  Expr Q = apply(fn_Q(), {Expr(J.u())});
  if (dim == 1) return quasilinear(apply(fn_D(), {Expr(J.coord({J.x(0)}))}), Q);
  return divergence(apply(fn_D(), {Expr(omega_symbol())}), Q);
}

Symbol PdeSpec::slot() const {
  if (form == PdeForm::Divergence) return omega_symbol();
  const auto& J = jet();
  return J.coord({J.x(0)});
}

Expr PdeSpec::right_side() const {
  const auto& J = jet();
  switch (form) {
    case PdeForm::Quasilinear:
      return D * Expr(J.coord({J.x(0), J.x(0)})) + Q;
    case PdeForm::Divergence: {
      Symbol x1 = J.x(0), x2 = J.x(1);
      Expr p1(J.coord({x1})), p2(J.coord({x2}));
      Expr h11(J.coord({x1, x1})), h12(J.coord({x1, x2})), h22(J.coord({x2, x2}));
      Expr omega = p1 * p1 + p2 * p2;
      Bindings b{{omega_symbol(), omega}};
      Expr d = substitute(D, b);
      Expr dp = substitute(diff(D, omega_symbol()), b);
      return d * (h11 + h22) + 2 * dp * (p1 * p1 * h11 + 2 * p1 * p2 * h12 + p2 * p2 * h22) + Q;
    }
    case PdeForm::General:
      return rhs;
  }
  return rhs;
}

std::string PdeSpec::str() const {
  switch (form) {
    case PdeForm::Quasilinear:
      return "u_t = (" + D.str() + ")*u_xx + " + Q.str();
    case PdeForm::Divergence:
      return "u_t = div((" + D.str() + ")*grad u) + " + Q.str() + ", W = |grad u|^2";
    case PdeForm::General:
      return "u_t = " + rhs.str();
  }
  return "";
}

Expr residual_expr(const PdeSpec& pde) {
  const auto& J = pde.jet();
  return Expr(J.coord({J.t()})) - pde.right_side();
}

Expr invariance_expression(const PdeSpec& pde, const VectorField& X) {
  const auto& J = pde.jet();
  Expr F = residual_expr(pde);
  auto pr = prolong2_for(X, J, F.free_symbols());
  Expr E = pr.apply(F, J);
  return substitute(E, {{J.coord({J.t()}), pde.right_side()}});
}

InvarianceReport check_invariance(const PdeSpec& pde, const VectorField& X,
                                  const SamplerConfig& cfg) {
  InvarianceReport r;
  r.verdict = is_zero(invariance_expression(pde, X), cfg);
  r.pass = r.verdict.zero;
  return r;
}

DeterminingSystem determining_system(const SamplerConfig& cfg) {
  const auto& J = JetSpace::one();
  Symbol t = J.t(), x = J.x(0), u = J.u();
  Symbol ux = J.coord({x}), uxx = J.coord({x, x});
  Symbol f0 = Symbol::intern("xi0", SymbolKind::Function);
  Symbol f1 = Symbol::intern("xi1", SymbolKind::Function);
  Symbol fe = Symbol::intern("eta", SymbolKind::Function);
  std::vector<Expr> txu{Expr(t), Expr(x), Expr(u)};
  auto xi0 = [&](int dt) { return apply(f0, {Expr(t)}, {dt}); };
  auto xi1 = [&](int dt, int dx, int du) { return apply(f1, txu, {dt, dx, du}); };
  auto eta = [&](int dt, int dx, int du) { return apply(fe, txu, {dt, dx, du}); };

  PdeSpec pde = PdeSpec::generic(1);
  VectorField X{{xi0(0), xi1(0, 0, 0)}, eta(0, 0, 0)};
  Expr E = expand(invariance_expression(pde, X));
  auto parts = collect(E, uxx);

  DeterminingSystem ds;
  for (const auto& [p, c] : parts)
    if (p != 0 && p != 1)
      throw Error("invariance condition is not linear in u_xx (power " + std::to_string(p) + ")");
  ds.uxx_coefficient = parts.count(1) ? parts.at(1) : Expr(0);
  ds.remainder = parts.count(0) ? parts.at(0) : Expr(0);

  Expr D = apply(fn_D(), {Expr(ux)});
  Expr Dp = apply(fn_D(), {Expr(ux)}, {1});
  Expr Q = apply(fn_Q(), {Expr(u)});
  Expr Qd = apply(fn_Q(), {Expr(u)}, {1});
  Expr p(ux);
  ds.printed_uxx = (eta(0, 1, 0) + (eta(0, 0, 1) - xi1(0, 1, 0)) * p - xi1(0, 0, 1) * p * p) * Dp +
                   (xi0(1) - 2 * xi1(0, 1, 0) - 2 * xi1(0, 0, 1) * p) * D;
  ds.printed_remainder =
      -eta(1, 0, 0) + (xi0(1) - eta(0, 0, 1)) * Q + eta(0, 0, 0) * Qd +
      (xi1(1, 0, 0) + xi1(0, 0, 1) * Q) * p +
      (eta(0, 2, 0) + (2 * eta(0, 1, 1) - xi1(0, 2, 0)) * p +
       (eta(0, 0, 2) - 2 * xi1(0, 1, 1)) * p * p - xi1(0, 0, 2) * pow(p, Expr(3))) *
          D;
  ds.remainder_reading =
      "the '+ +' between the two displayed lines is read as a single '+': " +
      ds.printed_remainder.str() + " = 0";

  auto factor = [&](const Expr& got, const Expr& printed) -> std::optional<int> {
    for (int f : {1, -1}) {
      auto v = is_zero(got - Expr(f) * printed, cfg);
      if (v.zero) return f;
    }
    return std::nullopt;
  };
  ds.uxx_factor = factor(ds.uxx_coefficient, ds.printed_uxx);
  ds.remainder_factor = factor(ds.remainder, ds.printed_remainder);
  ds.uxx_match = ds.uxx_factor.has_value();
  ds.remainder_match = ds.remainder_factor.has_value();
  return ds;
}

Expr coefficient_ode_residual(const Expr& D, const Scalar& e0, const Scalar& e1,
                              const Scalar& e2, const Scalar& e3) {
  Symbol ux = JetSpace::one().coord({JetSpace::one().x(0)});
  Expr p(ux);
  return (Expr(e0) + Expr(e1) * p - Expr(e2) * p * p) * diff(D, ux) +
         (Expr(e3) - 2 * Expr(e2) * p) * D;
}

CoefficientOdeSolution solve_coefficient_ode(const Scalar& e0, const Scalar& e1, const Scalar& e2,
                                             const Scalar& e3) {
  Symbol ux = JetSpace::one().coord({JetSpace::one().x(0)});
  Expr p(ux);
  Expr C(Symbol::intern("C", SymbolKind::Parameter));
  CoefficientOdeSolution s;
  if (e0.is_zero() && e1.is_zero() && e2.is_zero()) {
    if (!e3.is_zero()) {
      s.branch = "degenerate";
      s.D = Expr(0);
      s.note = "e0 = e1 = e2 = 0 with e3 != 0 forces D = 0";
      return s;
    }
    s.branch = "i";
    s.D = apply(fn_D(), {p});
    s.arbitrary = true;
    s.note = "D is an arbitrary non-constant function";
    return s;
  }
  if (e2.is_zero() && !e1.is_zero()) {
    s.branch = "ii";
    s.D = C * pow(p + Expr(e0 / e1), Expr(-(e3 / e1)));
    return s;
  }
  if (e2.is_zero()) {
    s.branch = "iii";
    s.D = C * exp(-Expr(e3 / e0) * p);
    return s;
  }
  if (!e1.is_zero() || !e0.is_zero()) {
    s.branch = "iv";
    Symbol v = Symbol::intern("s", SymbolKind::Parameter);
    Expr sv(v);
    Expr integrand = (2 * Expr(e2) * sv - Expr(e3)) / (Expr(e2) * sv * sv - Expr(e1) * sv - Expr(e0));
    // Lower limit is absorbed into C; pick an integer where the denominator
    // does not vanish.
    long lo = 1;
    for (; lo < 64; ++lo) {
      Scalar L(lo);
      if (!(e2 * L * L - e1 * L - e0).is_zero()) break;
    }
    s.D = C * exp(-integral(integrand, v, Expr(lo), p));
    s.note = "quadrature form, lower limit " + std::to_string(lo);
    return s;
  }
  s.branch = "v";
  s.D = C * pow(p, Expr(-2)) * exp(-Expr(e3 / e2) * pow(p, Expr(-1)));
  s.note = "re-derived: the exponent is -(e3/e2)/u_x; the displayed -(e3/e0)/u_x divides by e0 = 0";
  return s;
}

}  // namespace gradsym
