#include "gradsym/pde.hpp"

namespace gradsym {

EquivTransform EquivTransform::after(const EquivTransform& first) const {
  EquivTransform r;
  Scalar a1 = first.eff_alpha(), b1 = first.eff_beta(), g1 = first.eff_gamma();
  Scalar a2 = eff_alpha(), b2 = eff_beta(), g2 = eff_gamma();
  r.alpha = a2 * a1;
  r.beta = b2 * b1;
  r.gamma = g2 * g1;
  r.delta0 = a2 * first.delta0 + delta0;
  r.delta3 = g2 * first.delta3 + delta3;
  // x~~ = b2 R2 (b1 R1 x + d1) + d2
  r.cos_rot = cos_rot * first.cos_rot - sin_rot * first.sin_rot;
  r.sin_rot = sin_rot * first.cos_rot + cos_rot * first.sin_rot;
  r.delta1 = b2 * (cos_rot * first.delta1 - sin_rot * first.delta2) + delta1;
  r.delta2 = b2 * (sin_rot * first.delta1 + cos_rot * first.delta2) + delta2;
  return r;
}

namespace {

void check_transform(const EquivTransform& g) {
  if (g.alpha.is_zero() || g.beta.is_zero() || g.gamma.is_zero())
    throw InvalidArgument("equivalence transformation needs alpha*beta*gamma != 0");
  if (!(g.cos_rot * g.cos_rot + g.sin_rot * g.sin_rot).is_one())
    throw InvalidArgument("rotation pair must satisfy cos^2 + sin^2 = 1");
}

}  // namespace

PdeSpec apply_equivalence(const PdeSpec& pde, const EquivTransform& g) {
  check_transform(g);
  if (pde.form == PdeForm::General)
    throw InvalidArgument("equivalence transformations act on the D, Q classes only");
  Scalar a = g.eff_alpha(), b = g.eff_beta(), c = g.eff_gamma();
  const auto& J = pde.jet();
  Expr slot(pde.slot());
  Expr scaled = pde.dim == 1 ? Expr(b / c) * slot : Expr((b / c) * (b / c)) * slot;
  PdeSpec out = pde;
  out.D = Expr(b * b / a) * substitute(pde.D, {{pde.slot(), scaled}});
  out.Q = Expr(c / a) *
          substitute(pde.Q, {{J.u(), (Expr(J.u()) - Expr(g.delta3)) / Expr(c)}});
  return out;
}

Expr equivalence_pullback(const PdeSpec& source, const PdeSpec& target, const EquivTransform& g) {
  check_transform(g);
  Scalar a = g.eff_alpha(), b = g.eff_beta(), c = g.eff_gamma();
  const auto& J = source.jet();
  Bindings m;
  Symbol t = J.t(), u = J.u();
  m[u] = Expr(c) * Expr(u) + Expr(g.delta3);
  m[t] = Expr(a) * Expr(t) + Expr(g.delta0);
  m[J.coord({t})] = Expr(c / a) * Expr(J.coord({t}));
  if (source.dim == 1) {
    Symbol x = J.x(0);
    m[x] = Expr(b) * Expr(x) + Expr(g.delta1);
    m[J.coord({x})] = Expr(c / b) * Expr(J.coord({x}));
    m[J.coord({x, x})] = Expr(c / (b * b)) * Expr(J.coord({x, x}));
  } else {
    Symbol x1 = J.x(0), x2 = J.x(1);
    Scalar co = g.cos_rot, si = g.sin_rot;
    Scalar R[2][2] = {{co, -si}, {si, co}};
    Symbol xs[2] = {x1, x2};
    Scalar d[2] = {g.delta1, g.delta2};
    for (int i = 0; i < 2; ++i) {
      m[xs[i]] = Expr(b) * (Expr(R[i][0]) * Expr(x1) + Expr(R[i][1]) * Expr(x2)) + Expr(d[i]);
      m[J.coord({xs[i]})] = Expr(c / b) * (Expr(R[i][0]) * Expr(J.coord({x1})) +
                                          Expr(R[i][1]) * Expr(J.coord({x2})));
    }
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j) {
        std::vector<Expr> terms;
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l)
            terms.push_back(Expr(R[i][k] * R[j][l]) * Expr(J.coord({xs[k], xs[l]})));
        m[J.coord({xs[i], xs[j]})] = Expr(c / (b * b)) * add(terms);
      }
  }
  Expr pulled = substitute(residual_expr(target), m);
  return pulled - Expr(c / a) * residual_expr(source);
}

namespace {

ChangeOfVariables exponential_map(const Scalar& c, Symbol t, const Scalar& e2) {
  // tau = exp(c t)/c, w = exp(-e2 t) u
  ChangeOfVariables m;
  Expr T(t);
  m.tau = exp(Expr(c) * T) / Expr(c);
  m.a = exp(-Expr(e2) * T);
  m.b = Expr(0);
  m.t_of_tau = log(Expr(c) * T) / Expr(c);
  m.tau_sign = c.sign();
  return m;
}

}  // namespace

FormPreservingResult apply_form_preserving(const PdeSpec& pde, FormMap map, const Scalar& q,
                                           const Scalar& k, const Scalar& e2) {
  if (pde.form == PdeForm::General) throw InvalidArgument("form-preserving maps act on D, Q classes");
  const auto& J = pde.jet();
  Symbol t = J.t(), u = J.u();
  Expr T(t), U(u);
  ChangeOfVariables m;
  switch (map) {
    case FormMap::ConstantSource:
      m.tau = T;
      m.a = Expr(1);
      m.b = -Expr(q) * T;
      m.t_of_tau = T;
      break;
    case FormMap::Exponential1d:
      if (pde.dim != 1) throw InvalidArgument("map 3-0b applies to the 1-D class");
      if (k.is_zero() || e2.is_zero()) throw InvalidArgument("map 3-0b needs k != 0 and e2 != 0");
      m = exponential_map(e2 * k, t, e2);
      break;
    case FormMap::Exponential2d:
      if (pde.dim != 2) throw InvalidArgument("map 6 applies to the 2-D class");
      if (k.is_zero() || e2.is_zero()) throw InvalidArgument("map 6 needs k != 0 and e2 != 0");
      m = exponential_map(Scalar(2) * e2 * k, t, e2);
      break;
  }
  Expr tp = diff(m.tau, t);
  Expr ap = diff(m.a, t);
  Expr bp = diff(m.b, t);
  Expr slot(pde.slot());
  Expr inner = pde.dim == 1 ? slot / m.a : slot / (m.a * m.a);
  Expr Dt = substitute(pde.D, {{pde.slot(), inner}}) / tp;
  Expr Qt = (m.a * substitute(pde.Q, {{u, (U - m.b) / m.a}}) + ap / m.a * (U - m.b) + bp) / tp;

  FormPreservingResult r;
  r.map = m;
  r.d_dt_D = diff(Dt, t);
  r.d_dt_Q = diff(Qt, t);
  r.target = pde;
  r.target.D = substitute(Dt, {{t, Expr(0)}});
  r.target.Q = substitute(Qt, {{t, Expr(0)}});

  Bindings pull;
  pull[u] = m.a * U + m.b;
  pull[J.coord({t})] = (m.a * Expr(J.coord({t})) + ap * U + bp) / tp;
  for (int i = 0; i < J.dim(); ++i) {
    Symbol xi = J.x(i);
    pull[J.coord({xi})] = m.a * Expr(J.coord({xi}));
    for (int j = i; j < J.dim(); ++j) {
      Symbol xj = J.x(j);
      pull[J.coord({xi, xj})] = m.a * Expr(J.coord({xi, xj}));
    }
  }
  r.pullback = substitute(residual_expr(r.target), pull) * tp / m.a - residual_expr(pde);
  return r;
}

VectorField push_forward(const VectorField& X, const ChangeOfVariables& m, const JetSpace& jet) {
  Symbol t = jet.t(), u = jet.u();
  Expr tp = diff(m.tau, t), ap = diff(m.a, t), bp = diff(m.b, t);
  VectorField out = X;
  out.xi[0] = X.xi[0] * tp;
  out.eta = X.xi[0] * (ap * Expr(u) + bp) + m.a * X.eta;
  // Re-express in the new variables: old t = t_of_tau(new t), old u = (w - b)/a.
  Expr old_t = m.t_of_tau;
  Bindings back{{t, old_t}};
  Expr a_new = substitute(m.a, back), b_new = substitute(m.b, back);
  Bindings to_new{{t, old_t}, {u, (Expr(u) - b_new) / a_new}};
  return out.map([&](const Expr& e) { return substitute(e, to_new); });
}

}  // namespace gradsym
