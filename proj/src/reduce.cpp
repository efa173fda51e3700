#include "gradsym/reduce.hpp"

namespace gradsym {

namespace {

Expr S(const Scalar& s) { return Expr(s); }

void check_k(const Scalar& k, bool allow_minus_one) {
  if (k.is_zero()) throw InvalidArgument("k = 0 gives the linear equation");
  if (k == Scalar(-1, 2)) throw InvalidArgument("k = -1/2: the radial equation degenerates");
  if (!allow_minus_one && k == Scalar(-1)) throw InvalidArgument("k = -1 is excluded for the reductions");
}

// Coefficient of the case iii-l0 equation.
Expr separable_coefficient(const Scalar& k) {
  Expr base = S((k + Scalar(1)) / k);
  return S((3 * k + Scalar(1)) / k) * pow(base, S(Scalar(1) + 2 * k));
}

}  // namespace

Symbol fn_U() { return Symbol::intern("U", SymbolKind::Function); }
Symbol sym_omega() { return Symbol::intern("omega", SymbolKind::Parameter); }
Symbol sym_phi(int order) { return Symbol::intern("phi" + std::to_string(order), SymbolKind::Parameter); }

RadialPde radial_reduce(const Scalar& k, int sign) {
  check_k(k, true);
  if (sign != 1 && sign != -1) throw InvalidArgument("branch sign must be +1 or -1");
  const auto& J = JetSpace::one();
  Expr x(J.x(0));
  Expr ux(J.coord({J.x(0)})), uxx(J.coord({J.x(0), J.x(0)}));
  Expr e1 = S(2 * k + Scalar(1)), e0 = S(2 * k);
  Expr rhs;
  if (sign > 0) {
    rhs = pow(ux, e1) / x + e1 * pow(ux, e0) * uxx;
  } else {
    rhs = -pow(-ux, e1) / x + e1 * pow(-ux, e0) * uxx;
  }
  RadialPde out{k, sign, PdeSpec::general(1, rhs), Expr(0)};

  // Witness: u(t, x1, x2) = U(t, r) in the 2-D residual against the radial one.
  const auto& J2 = JetSpace::two();
  Symbol t = J2.t();
  Expr r = sqrt(Expr(J2.x(0)) * Expr(J2.x(0)) + Expr(J2.x(1)) * Expr(J2.x(1)));
  Expr U = apply(fn_U(), {Expr(t), r});
  PdeSpec two = PdeSpec::divergence(pow(Expr(omega_symbol()), S(k)), Expr(0));
  Bindings b2{{J2.u(), U}};
  for (int o = 1; o <= 2; ++o)
    for (Symbol c : J2.coords(o)) {
      Expr d = U;
      for (Symbol base : c.jet_index()) d = diff(d, base);
      b2[c] = d;
    }
  Expr res2 = substitute(residual_expr(two), b2);
  Bindings b1{{J.x(0), r},
              {J.u(), U},
              {J.coord({J.t()}), apply(fn_U(), {Expr(t), r}, {1, 0})},
              {J.coord({J.x(0)}), apply(fn_U(), {Expr(t), r}, {0, 1})},
              {J.coord({J.x(0), J.x(0)}), apply(fn_U(), {Expr(t), r}, {0, 2})}};
  Expr res1 = substitute(residual_expr(out.pde), b1);
  out.witness = res2 - res1;
  return out;
}

std::vector<std::pair<std::string, VectorField>> radial_algebra(const Scalar& k) {
  const auto& J = JetSpace::one();
  Expr t(J.t()), x(J.x(0)), u(J.u());
  return {
      {"X0", VectorField{{Expr(0), Expr(0)}, Expr(1)}},
      {"X1", VectorField{{Expr(1), Expr(0)}, Expr(0)}},
      {"D0", VectorField{{S(2 * (k + Scalar(1))) * t, x}, Expr(0)}},
      {"D1", VectorField{{Expr(0), S(k) * x}, S(k + Scalar(1)) * u}},
  };
}

std::vector<std::string> reduction_ids() { return {"i", "ii", "iii", "iii-l0", "iv"}; }

Expr printed_ode(const std::string& id, const Scalar& k, const Scalar& lambda) {
  Expr w(sym_omega()), p0(sym_phi(0)), p1(sym_phi(1)), p2(sym_phi(2));
  Expr K = S(k), L = S(lambda);
  Expr a = S(Scalar(1) / (2 * (k + Scalar(1))));
  Expr lead = S(2 * k + Scalar(1)) * p2 + p1 / w;
  if (id == "i") return pow(p1, S(2 * k + Scalar(1))) + S(2 * k + Scalar(1)) * w * pow(p1, S(2 * k)) * p2;
  if (id == "ii") return lead + a * pow(p1, S(Scalar(1) - 2 * k)) - L * a * pow(p1, S(-2 * k));
  if (id == "iii")
    return lead + (K / L) * w * pow(p1, S(Scalar(1) - 2 * k)) - ((K + Expr(1)) / L) * p0 * pow(p1, S(-2 * k));
  if (id == "iii-l0") return p1 - separable_coefficient(k) * pow(p0, S(Scalar(1) + 2 * k));
  if (id == "iv") {
    Scalar g = (Scalar(1) + lambda * k) / (2 * (k + Scalar(1)));
    return lead + S(g) * w * pow(p1, S(Scalar(1) - 2 * k)) - (L / Expr(2)) * p0 * pow(p1, S(-2 * k));
  }
  throw InvalidArgument("unknown reduction case: " + id);
}

ReductionCase reduce_to_ode(const std::string& id, const Scalar& k, const Scalar& lambda) {
  check_k(k, false);
  const auto& J = JetSpace::one();
  Symbol ts = J.t(), xs = J.x(0);
  Expr t(ts), x(xs);
  Scalar k1 = k + Scalar(1);

  ReductionCase c;
  c.id = id;
  c.k = k;
  c.lambda = lambda;
  if (id == "i") {
    c.generators = "X1";
    c.ansatz = {Expr(0), Expr(1), x, "U = phi(omega), omega = r"};
    c.printed_label = "(4-8)";
  } else if (id == "ii") {
    c.generators = "D0 + lam X0";
    Scalar a = Scalar(1) / (2 * k1);
    c.ansatz = {S(lambda * a) * log(t), Expr(1), x * pow(t, S(-a)),
                "U = lam/(2(k+1)) log t + phi(omega), omega = r t^(-1/(2(k+1)))"};
    c.printed_label = "(4-9)";
  } else if (id == "iii") {
    if (lambda.is_zero()) throw InvalidArgument("case iii needs lam != 0 (use iii-l0)");
    c.generators = "D1 + lam X1";
    c.ansatz = {Expr(0), exp(S(k1 / lambda) * t), x * exp(S(-k / lambda) * t),
                "U = exp((k+1)t/lam) phi(omega), omega = r exp(-k t/lam)"};
    c.printed_label = "(4-10)";
  } else if (id == "iii-l0") {
    c.generators = "D1";
    c.ansatz = {Expr(0), pow(x, S(k1 / k)), t, "U = r^((k+1)/k) phi(t)"};
    c.printed_label = "(4-11)";
  } else if (id == "iv") {
    if (lambda.is_zero()) throw InvalidArgument("case iv needs lam != 0");
    c.generators = "D0 + lam D1";
    c.gamma = (Scalar(1) + lambda * k) / (2 * k1);
    c.ansatz = {Expr(0), pow(t, S(lambda / Scalar(2))), x * pow(t, S(-c.gamma)),
                "U = t^(lam/2) phi(omega), omega = r t^(-gamma), gamma = (1 + lam k)/(2(k+1))"};
    c.printed_label = "(4-12)";
  } else {
    throw InvalidArgument("unknown reduction case: " + id);
  }

  // Chain rule for U = A + B phi(omega).
  Expr p0(sym_phi(0)), p1(sym_phi(1)), p2(sym_phi(2));
  const Expr& A = c.ansatz.A;
  const Expr& B = c.ansatz.B;
  const Expr& w = c.ansatz.omega;
  Expr wt = diff(w, ts), wr = diff(w, xs), wrr = diff(wr, xs);
  Expr Ut = diff(A, ts) + diff(B, ts) * p0 + B * p1 * wt;
  Expr Ur = diff(A, xs) + diff(B, xs) * p0 + B * p1 * wr;
  Expr Urr = diff(diff(A, xs), xs) + diff(diff(B, xs), xs) * p0 + Expr(2) * diff(B, xs) * p1 * wr +
             B * p2 * wr * wr + B * p1 * wrr;
  RadialPde rad = radial_reduce(k);
  c.substituted = substitute(residual_expr(rad.pde), {{J.u(), A + B * p0},
                                                      {J.coord({ts}), Ut},
                                                      {J.coord({xs}), Ur},
                                                      {J.coord({xs, xs}), Urr}});

  c.order = wr.is_zero() ? 1 : 2;
  Symbol top = sym_phi(c.order);
  Expr lead = diff(c.substituted, top);
  c.clearing_factor = (c.order == 2 ? S(2 * k + Scalar(1)) : Expr(1)) / lead;
  Expr scaled = c.substituted * c.clearing_factor;

  // Rewrite in omega; what remains of t and r must drop out.
  Expr ode;
  if (c.order == 2) {
    Expr scale = w / x;  // omega = r * scale(t)
    ode = substitute(scaled, {{xs, Expr(sym_omega()) / scale}});
    if (!is_zero(diff(ode, ts)).zero) throw Error("ansatz of case " + id + " does not reduce");
    ode = substitute(ode, {{ts, Expr(1)}});
  } else {
    ode = substitute(scaled, {{ts, Expr(sym_omega())}});
    if (!is_zero(diff(ode, xs)).zero) throw Error("ansatz of case " + id + " does not reduce");
    ode = substitute(ode, {{xs, Expr(1)}});
  }
  c.ode = ode;
  Expr top_coef = diff(c.ode, top);
  c.rhs = -substitute(c.ode, {{top, Expr(0)}}) / top_coef;

  c.printed = printed_ode(id, k, lambda);
  c.matches_printed_verbatim = is_zero(c.ode - c.printed).zero;
  Expr pc = diff(c.printed, top);
  c.matches_printed = is_zero(c.ode / top_coef - c.printed / pc).zero;
  if (!c.matches_printed)
    c.note = "derived ODE differs from printed " + c.printed_label;
  else if (!c.matches_printed_verbatim)
    c.note = "agrees with printed " + c.printed_label + " after dividing by the leading coefficient";
  return c;
}

double ansatz_value(const ReductionCase& c, const std::function<double(double)>& phi, double t, double r) {
  const auto& J = JetSpace::one();
  std::map<Symbol, long double> pt{{J.t(), t}, {J.x(0), r}};
  double A = static_cast<double>(eval_float(c.ansatz.A, pt));
  double B = static_cast<double>(eval_float(c.ansatz.B, pt));
  double w = static_cast<double>(eval_float(c.ansatz.omega, pt));
  return A + B * phi(w);
}

Expr first_integral_identity(const Scalar& k, const Scalar& lambda) {
  if (lambda.is_zero()) throw InvalidArgument("first integral needs lam != 0");
  Expr w(sym_omega()), p0(sym_phi(0)), p1(sym_phi(1)), p2(sym_phi(2));
  Expr f = w * pow(p1, S(Scalar(1) + 2 * k));
  Expr df = diff(f, sym_omega()) + diff(f, sym_phi(0)) * p1 + diff(f, sym_phi(1)) * p2;
  Expr right = S((k + Scalar(1)) / lambda) * w * p0 - S(k / lambda) * w * w * p1;
  return w * pow(p1, S(2 * k)) * printed_ode("iii", k, lambda) - (df - right);
}

}  // namespace gradsym
