#include "doctest.h"

#include "gradsym/pde.hpp"

using namespace gradsym;

namespace {

Expr E(const char* s) {
  JetSpace::two();
  return parse(s);
}

VectorField f1(const char* xi0, const char* xi1, const char* eta) {
  return VectorField{{E(xi0), E(xi1)}, E(eta)};
}

VectorField f2(const char* xi0, const char* xi1, const char* xi2, const char* eta) {
  return VectorField{{E(xi0), E(xi1), E(xi2)}, E(eta)};
}

bool zero(const Expr& e, const SamplerConfig& cfg = {}) { return is_zero(e, cfg).zero; }

PdeSpec q1(const char* D, const char* Q) { return PdeSpec::quasilinear(E(D), E(Q)); }
PdeSpec q2(const char* D, const char* Q) { return PdeSpec::divergence(E(D), E(Q)); }

Expr inst(const Expr& e, std::map<std::string, Scalar> vals) {
  Bindings b;
  for (const auto& [n, v] : vals) b[Symbol::intern(n, SymbolKind::Parameter)] = Expr(v);
  return substitute(e, b);
}

PdeSpec inst(PdeSpec p, const std::map<std::string, Scalar>& vals) {
  p.D = inst(p.D, vals);
  p.Q = inst(p.Q, vals);
  return p;
}

VectorField inst(const VectorField& X, const std::map<std::string, Scalar>& vals) {
  return X.map([&](const Expr& e) { return inst(e, vals); });
}

}  // namespace

TEST_CASE("residual examples") {
  CHECK(residual_expr(q1("u_x^k", "0")) == E("u_t - u_x^k*u_xx"));
  CHECK(zero(residual_expr(q2("W", "0")) -
             E("u_t - (u_x1^2 + u_x2^2)*(u_x1x1 + u_x2x2) - 2*(u_x1^2*u_x1x1 + "
               "2*u_x1*u_x2*u_x1x2 + u_x2^2*u_x2x2)")));
  CHECK(zero(residual_expr(PdeSpec::generic(1)) - E("u_t - D(u_x)*u_xx - Q(u)")));
}

TEST_CASE("2-D right side matches the expanded divergence") {
  // div(D grad u) computed directly with total derivatives of D(|grad u|^2) u_xi.
  const auto& J = JetSpace::two();
  PdeSpec p = q2("exp(-W/3)", "u^2");
  Expr omega = E("u_x1^2 + u_x2^2");
  Expr d = substitute(p.D, {{omega_symbol(), omega}});
  Expr div = total_derivative(d * E("u_x1"), J.x(0), J) + total_derivative(d * E("u_x2"), J.x(1), J);
  CHECK(zero(p.right_side() - div - p.Q));
}

TEST_CASE("invariance examples") {
  PdeSpec g1 = PdeSpec::generic(1);
  CHECK(invariance_expression(g1, f1("1", "0", "0")).is_zero());
  CHECK(check_invariance(g1, f1("0", "1", "0")).pass);
  CHECK(check_invariance(q1("D(u_x)", "u"), f1("0", "0", "exp(t)")).pass);

  auto bad = check_invariance(q1("u_x", "0"), f1("0", "0", "u"));
  CHECK_FALSE(bad.pass);
  CHECK(bad.verdict.witness.has_value());

  for (Scalar e1 : {Scalar(1), Scalar(-1)}) {
    auto X4 = inst(f1("0", "0", "0"), {});
    X4 = VectorField{{E("t^2"), E("0")}, -(E("2*t*u") + Expr(e1))};
    CHECK(check_invariance(inst(q1("u_x", "e1*u^2"), {{"e1", e1}}), X4).pass);
  }

  SamplerConfig cfg;
  auto r8 = inst(q2("W^(1/2)", "e1*u^2 + e2"), {{"e1", Scalar(-1)}, {"e2", Scalar(-1)}});
  auto X5 = inst(f2("cos(2*t)", "0", "0", "2*(sin(2*t)*u + e1*cos(2*t))"), {{"e1", Scalar(-1)}});
  auto rep = check_invariance(r8, X5, cfg);
  CHECK(rep.pass);
  CHECK_FALSE(rep.verdict.exact);

  auto f = check_invariance(q1("u_x", "u^3"), f1("t", "0", "-u"));
  CHECK_FALSE(f.pass);
  REQUIRE(f.verdict.witness);
  CHECK(f.verdict.witness->residual > 1e-3);
}

TEST_CASE("principal algebras hold for opaque D and Q") {
  PdeSpec g1 = PdeSpec::generic(1), g2 = PdeSpec::generic(2);
  for (const auto& X : {f1("1", "0", "0"), f1("0", "1", "0")}) CHECK(check_invariance(g1, X).pass);
  for (const auto& X : {f2("1", "0", "0", "0"), f2("0", "1", "0", "0"), f2("0", "0", "1", "0"),
                        f2("0", "x2", "-x1", "0")})
    CHECK(check_invariance(g2, X).pass);
  CHECK_FALSE(check_invariance(g2, f2("0", "x1", "x2", "0")).pass);
}

TEST_CASE("invariance expression is linear in the generator") {
  PdeSpec p = q2("W^(-1)", "3*u^(-1) + u");
  VectorField A = f2("exp(2*t)", "0", "0", "exp(2*t)*u"), B = f2("t^2", "x1*t", "x2", "u^2 + x1");
  Expr a = E("2/3"), b = E("-7");
  Expr lhs = invariance_expression(p, a * A + b * B);
  Expr rhs = a * invariance_expression(p, A) + b * invariance_expression(p, B);
  CHECK(zero(lhs - rhs));
}

TEST_CASE("determining system matches the displayed equations") {
  auto ds = determining_system();
  CHECK(ds.uxx_match);
  CHECK(ds.remainder_match);
  REQUIRE(ds.uxx_factor);
  REQUIRE(ds.remainder_factor);
  CHECK(*ds.uxx_factor == -1);
  CHECK(*ds.remainder_factor == -1);
  CHECK(ds.remainder_reading.find("'+ +'") != std::string::npos);

  // xi0 = 1, xi1 = 0, eta = 0 annihilates both parts.
  Symbol f0 = *Symbol::lookup("xi0"), f1s = *Symbol::lookup("xi1"), fe = *Symbol::lookup("eta");
  auto spec = [&](const Expr& e) {
    Expr r = substitute_function(e, f0, {*Symbol::lookup("t")}, Expr(1));
    r = substitute_function(r, f1s, {*Symbol::lookup("t"), *Symbol::lookup("x"), *Symbol::lookup("u")}, Expr(0));
    return substitute_function(r, fe, {*Symbol::lookup("t"), *Symbol::lookup("x"), *Symbol::lookup("u")}, Expr(0));
  };
  CHECK(spec(ds.uxx_coefficient).is_zero());
  CHECK(spec(ds.remainder).is_zero());
}

TEST_CASE("coefficient ODE branches") {
  auto ii = solve_coefficient_ode(Scalar(0), Scalar(1), Scalar(0), Scalar(-3));
  CHECK(ii.branch == "ii");
  CHECK(ii.D == E("C*u_x^3"));

  auto iii = solve_coefficient_ode(Scalar(2), Scalar(0), Scalar(0), Scalar(5));
  CHECK(iii.branch == "iii");
  CHECK(iii.D == E("C*exp(-5/2*u_x)"));

  auto i = solve_coefficient_ode(Scalar(0), Scalar(0), Scalar(0), Scalar(0));
  CHECK(i.branch == "i");
  CHECK(i.arbitrary);

  auto v = solve_coefficient_ode(Scalar(0), Scalar(0), Scalar(2), Scalar(3));
  CHECK(v.branch == "v");
  CHECK(v.D == E("C*u_x^(-2)*exp(-3/2/u_x)"));

  struct Row {
    int e0, e1, e2, e3;
  };
  for (Row r : {Row{0, 1, 0, -3}, Row{3, 2, 0, 1}, Row{2, 0, 0, 5}, Row{0, 0, 2, 3}, Row{0, 0, 1, -1},
                Row{1, 1, 1, 1}, Row{-1, 3, 2, 0}, Row{2, -1, -1, 4}}) {
    Scalar e0(r.e0), e1(r.e1), e2(r.e2), e3(r.e3);
    auto s = solve_coefficient_ode(e0, e1, e2, e3);
    CAPTURE(s.branch);
    CAPTURE(s.D.str());
    SamplerConfig cfg;
    cfg.samples = 30;
    CHECK(zero(coefficient_ode_residual(s.D, e0, e1, e2, e3), cfg));
  }
  // The displayed branch (v) exponent, -(e3/e0)/u_x, cannot be evaluated with e0 = 0;
  // -(e3/e1)/u_x with e1 = 0 is equally undefined, so only the re-derived form is checked.
  CHECK_FALSE(zero(coefficient_ode_residual(E("C*u_x^(-2)*exp(-3/u_x)"), Scalar(0), Scalar(0),
                                             Scalar(2), Scalar(3))));
}

TEST_CASE("equivalence transformations") {
  PdeSpec p = q1("u_x^3 + u_x", "u^2 - u");
  EquivTransform id;
  auto same = apply_equivalence(p, id);
  CHECK(zero(same.D - p.D));
  CHECK(zero(same.Q - p.Q));

  EquivTransform tr;
  tr.reflect_t = true;
  auto r = apply_equivalence(p, tr);
  CHECK(zero(r.D + p.D));
  CHECK(zero(r.Q + p.Q));

  // u_t = u_x u_xx + lambda u^2 normalized to unit coefficient.
  for (int lam : {8, -27}) {
    EquivTransform g;
    int b = lam > 0 ? 2 : 3;
    g.alpha = Scalar(lam > 0 ? lam : -lam);
    g.beta = Scalar(b);
    auto n = apply_equivalence(q1("u_x", std::to_string(lam).append("*u^2").c_str()), g);
    CHECK(zero(n.D - E("u_x")));
    CHECK(zero(n.Q - Expr(Scalar(lam > 0 ? 1 : -1)) * E("u^2")));
  }

  CHECK_THROWS_AS(apply_equivalence(p, EquivTransform{Scalar(0)}), InvalidArgument);
}

TEST_CASE("equivalence action is a group action and pulls back residuals") {
  EquivTransform g1, g2;
  g1.alpha = Scalar(3);
  g1.beta = Scalar(-1, 2);
  g1.gamma = Scalar(2);
  g1.delta0 = Scalar(1);
  g1.delta3 = Scalar(-1, 3);
  g1.cos_rot = Scalar(3, 5);
  g1.sin_rot = Scalar(4, 5);
  g2.alpha = Scalar(1, 2);
  g2.beta = Scalar(3);
  g2.gamma = Scalar(-5, 4);
  g2.delta1 = Scalar(2);
  g2.delta3 = Scalar(7);
  g2.reflect_u = true;
  g2.cos_rot = Scalar(-5, 13);
  g2.sin_rot = Scalar(12, 13);
  for (const PdeSpec& p : {q1("u_x^3 + exp(u_x)", "u^2 - u"), q2("W^(1/2) + W", "exp(-u)")}) {
    auto two_step = apply_equivalence(apply_equivalence(p, g1), g2);
    auto direct = apply_equivalence(p, g2.after(g1));
    CHECK(zero(two_step.D - direct.D));
    CHECK(zero(two_step.Q - direct.Q));
    CHECK(zero(equivalence_pullback(p, apply_equivalence(p, g1), g1)));
    CHECK(zero(equivalence_pullback(p, direct, g2.after(g1))));
    CHECK_FALSE(zero(equivalence_pullback(p, p, g1)));
  }
}

TEST_CASE("constant source removal") {
  for (const PdeSpec& p : {q1("u_x^2 + 1", "5/2"), q2("exp(-W)", "-3")}) {
    auto r = apply_form_preserving(p, FormMap::ConstantSource, p.Q.num(), Scalar(0), Scalar(0));
    CHECK(r.target.Q.is_zero());
    CHECK(zero(r.target.D - p.D));
    CHECK(zero(r.pullback));
    CHECK(zero(r.d_dt_Q));
  }
}

TEST_CASE("exponential map sends the ku source case to the power case") {
  const auto& J = JetSpace::one();
  for (Scalar k : {Scalar(-3), Scalar(1, 2), Scalar(2)})
    for (Scalar e1 : {Scalar(1), Scalar(-1)})
      for (Scalar e2 : {Scalar(1), Scalar(-1)}) {
        std::map<std::string, Scalar> v{{"k", k}, {"e1", e1}, {"e2", e2}};
        PdeSpec src = inst(q1("u_x^k", "e1*u^(k + 1) + e2*u"), v);
        auto r = apply_form_preserving(src, FormMap::Exponential1d, Scalar(0), k, e2);
        CAPTURE(k.str());
        CHECK(zero(r.d_dt_D));
        CHECK(zero(r.d_dt_Q));
        CHECK(zero(r.target.D - inst(E("u_x^k"), v)));
        CHECK(zero(r.target.Q - inst(E("e1*u^(k + 1)"), v)));
        CHECK(zero(r.pullback));

        // Generators of the source become generators of the target.
        SamplerConfig cfg;
        if (r.map.tau_sign < 0) cfg.ranges[J.t()] = {Scalar(-2), Scalar(-1, 2)};
        auto X3 = inst(f1("exp(-k*e2*t)", "0", "e2*exp(-k*e2*t)*u"), v);
        auto Y3 = push_forward(X3, r.map, J);
        CHECK(zero(Y3.xi[0] - Expr(1), cfg));
        CHECK(zero(Y3.eta, cfg));
        auto Y1 = push_forward(f1("1", "0", "0"), r.map, J);
        CHECK(check_invariance(r.target, Y1, cfg).pass);
        CHECK(zero(Y1.xi[0] - Expr(e2 * k) * E("t"), cfg));
        CHECK(zero(Y1.eta + Expr(e2) * E("u"), cfg));
      }
}

TEST_CASE("exponential map in two dimensions with k = -1") {
  for (Scalar lam : {Scalar(-2), Scalar(1), Scalar(3)})
    for (Scalar e2 : {Scalar(1), Scalar(-1)}) {
      std::map<std::string, Scalar> v{{"lam", lam}, {"e2", e2}};
      auto r2 = apply_form_preserving(inst(q2("W^(-1)", "lam/u + e2*u"), v), FormMap::Exponential2d,
                                      Scalar(0), Scalar(-1), e2);
      CHECK(zero(r2.d_dt_D));
      CHECK(zero(r2.d_dt_Q));
      CHECK(zero(r2.target.D - E("W^(-1)")));
      CHECK(zero(r2.target.Q - inst(E("lam/u"), v)));
      CHECK(zero(r2.pullback));
    }
  for (Scalar lam : {Scalar(-2), Scalar(1), Scalar(3)}) {
    auto r4 = apply_form_preserving(q2("W^(-1)", (lam.str() + "*u").c_str()), FormMap::Exponential2d,
                                    Scalar(0), Scalar(-1), lam);
    CHECK(zero(r4.target.D - E("W^(-1)")));
    CHECK(zero(r4.target.Q));
    CHECK(zero(r4.d_dt_Q));
    CHECK(zero(r4.pullback));
  }
  CHECK_THROWS_AS(apply_form_preserving(q2("W", "u"), FormMap::Exponential2d, Scalar(0), Scalar(0),
                                        Scalar(1)),
                  InvalidArgument);
}
