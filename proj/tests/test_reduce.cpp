#include "doctest.h"

#include "gradsym/numerics.hpp"
#include "gradsym/reduce.hpp"

#include <cmath>

using namespace gradsym;

namespace {

Expr E(const char* s) {
  JetSpace::one();
  return parse(s);
}

SamplerConfig omega_range(Scalar lo, Scalar hi) {
  SamplerConfig cfg;
  cfg.ranges[sym_omega()] = {lo, hi};
  return cfg;
}

const std::vector<Scalar> kKs{Scalar(-2), Scalar(1, 2), Scalar(1), Scalar(2), Scalar(-3)};
const std::vector<Scalar> kLams{Scalar(-2), Scalar(1), Scalar(3)};

}  // namespace

TEST_CASE("radial equation") {
  auto r1 = radial_reduce(Scalar(1));
  CHECK(is_zero(r1.pde.rhs - E("u_x^3/x + 3*u_x^2*u_xx")).zero);
  auto rm = radial_reduce(Scalar(-1));
  // (1/r)(r U_r^-1)_r expanded.
  CHECK(is_zero(rm.pde.rhs - E("u_x^(-1)/x - u_x^(-2)*u_xx")).zero);
  for (const auto& k : kKs) {
    CAPTURE(k.str());
    CHECK(is_zero(radial_reduce(k).witness).zero);
  }
  // The U_r < 0 branch needs negative radial derivatives.
  SamplerConfig neg;
  neg.opaque_range = {Scalar(-2), Scalar(-1, 2)};
  CHECK(is_zero(radial_reduce(Scalar(1, 2), -1).witness, neg).zero);
  CHECK_FALSE(is_zero(radial_reduce(Scalar(1, 2), 1).witness, neg).zero);
  CHECK_THROWS_AS(radial_reduce(Scalar(0)), InvalidArgument);
  CHECK_THROWS_AS(radial_reduce(Scalar(-1, 2)), InvalidArgument);
}

TEST_CASE("radial symmetry algebra") {
  for (const auto& k : kKs) {
    auto rad = radial_reduce(k);
    for (const auto& [name, X] : radial_algebra(k)) {
      CAPTURE(name);
      CAPTURE(k.str());
      CHECK(check_invariance(rad.pde, X).pass);
    }
    // Galilei-type and mixed operators are not admitted.
    CHECK_FALSE(check_invariance(rad.pde, VectorField{{Expr(0), E("t")}, Expr(0)}).pass);
    CHECK_FALSE(check_invariance(rad.pde, VectorField{{E("t"), E("x")}, Expr(0)}).pass);
  }
}

TEST_CASE("reductions are machine derived and compared with the printed forms") {
  for (const auto& k : kKs)
    for (const auto& lam : kLams)
      for (const auto& id : reduction_ids()) {
        CAPTURE(id);
        CAPTURE(k.str());
        CAPTURE(lam.str());
        auto c = reduce_to_ode(id, k, lam);
        // Substituted residual times the clearing factor is the stored ODE.
        Expr back = c.order == 2 ? substitute(c.ode, {{sym_omega(), c.ansatz.omega}})
                                 : substitute(c.ode, {{sym_omega(), E("t")}});
        CHECK(is_zero(c.substituted * c.clearing_factor - back).zero);
        if (id == "ii")
          CHECK_FALSE(c.matches_printed);
        else
          CHECK(c.matches_printed);
        if (id == "iii" || id == "iv" || id == "iii-l0") CHECK(c.matches_printed_verbatim);
      }
}

TEST_CASE("case ii carries an omega factor on the third term") {
  for (const auto& k : kKs)
    for (const auto& lam : {Scalar(0), Scalar(2)}) {
      auto c = reduce_to_ode("ii", k, lam);
      Expr w(sym_omega()), p1(sym_phi(1)), p2(sym_phi(2));
      Scalar a = Scalar(1) / (2 * (k + Scalar(1)));
      Expr expected = Expr(2 * k + Scalar(1)) * p2 + p1 / w + Expr(a) * w * pow(p1, Expr(Scalar(1) - 2 * k)) -
                      Expr(lam * a) * pow(p1, Expr(-2 * k));
      CHECK(is_zero(c.ode - expected).zero);
      CHECK(c.note.find("(4-9)") != std::string::npos);
    }
}

TEST_CASE("reduction parameter checks") {
  CHECK_THROWS_AS(reduce_to_ode("iii", Scalar(1), Scalar(0)), InvalidArgument);
  CHECK_THROWS_AS(reduce_to_ode("iv", Scalar(1), Scalar(0)), InvalidArgument);
  CHECK_THROWS_AS(reduce_to_ode("ii", Scalar(-1), Scalar(1)), InvalidArgument);
  CHECK_THROWS_AS(reduce_to_ode("v", Scalar(1), Scalar(1)), InvalidArgument);
  auto c = reduce_to_ode("iii-l0", Scalar(1));
  // phi' = 4 * 2^3 phi^3.
  CHECK(is_zero(c.rhs - E("32*phi0^3")).zero);
}

TEST_CASE("Bernoulli linearization of the derived case-ii equation") {
  for (auto [k, c1] : std::vector<std::pair<Scalar, Scalar>>{
           {Scalar(-2), Scalar(0)}, {Scalar(-2), Scalar(1)}, {Scalar(1, 2), Scalar(5)}, {Scalar(2), Scalar(20)}}) {
    CAPTURE(k.str());
    Expr z = bernoulli_z(k, c1);
    CHECK(is_zero(bernoulli_linear_residual(k, z), omega_range(Scalar(1), Scalar(2))).zero);
    // Explicit linear form.
    Expr w(sym_omega());
    Expr lin = diff(z, sym_omega()) + Expr(2 * k / (2 * k + Scalar(1))) * z / w +
               Expr(k / ((k + Scalar(1)) * (2 * k + Scalar(1)))) * w;
    CHECK(is_zero(lin).zero);
  }
  // The printed equation does not linearize this way.
  Scalar k(2);
  Expr z = bernoulli_z(k, Scalar(20));
  Expr y = pow(z, Expr(Scalar(1, 4)));
  Expr printed = substitute(printed_ode("ii", k, Scalar(0)), {{sym_phi(1), y}, {sym_phi(2), diff(y, sym_omega())}});
  CHECK_FALSE(is_zero(printed, omega_range(Scalar(1), Scalar(2))).zero);
}

TEST_CASE("quadrature family") {
  auto s = bernoulli_closed_form(Scalar(-2), Scalar(0));
  REQUIRE(s.phi_expr);
  // 2 5^(1/4) sqrt(omega) up to the constant fixed by omega_ref = 1.
  for (double w : {0.5, 1.0, 1.7, 3.0, 6.5}) {
    double expect = 2 * std::pow(5.0, 0.25) * (std::sqrt(w) - 1);
    CHECK(s.phi(w) == doctest::Approx(expect).epsilon(1e-11));
    CHECK(static_cast<double>(eval_float(*s.phi_expr, {{sym_omega(), w}})) == doctest::Approx(expect).epsilon(1e-12));
  }
  auto h = bernoulli_closed_form(Scalar(1, 2), Scalar(5));
  REQUIRE(h.phi_expr);
  for (double w : {1.0, 1.3, 2.0})
    CHECK(h.phi(w) == doctest::Approx(static_cast<double>(eval_float(*h.phi_expr, {{sym_omega(), w}}))).epsilon(1e-11));
  auto k2 = bernoulli_closed_form(Scalar(2), Scalar(20));
  CHECK_NOTHROW(k2.phi(2.0));
  CHECK_THROWS_AS(k2.phi(3.0), DomainError);
  CHECK_THROWS_AS(bernoulli_closed_form(Scalar(-1, 3), Scalar(0)), InvalidArgument);
  // The family in the plane: u = phi(r t^(1/2)) for k = -2.
  double x[2] = {0.6, 0.8};
  CHECK(s(4.0, x) == doctest::Approx(2 * std::pow(5.0, 0.25) * (std::sqrt(2.0) - 1)));
}

TEST_CASE("quadrature family against adaptive integration of the derived ODE") {
  for (auto [k, c1] : std::vector<std::pair<Scalar, Scalar>>{
           {Scalar(-2), Scalar(0)}, {Scalar(1, 2), Scalar(5)}, {Scalar(2), Scalar(20)}}) {
    CAPTURE(k.str());
    auto s = bernoulli_closed_form(k, c1);
    auto c = reduce_to_ode("ii", k, Scalar(0));
    CompiledExpr rhs(c.rhs, {sym_omega(), sym_phi(0), sym_phi(1)});
    // Exact value and slope at omega = 1.
    double kd = k.to_double(), den = 2 * (kd + 1) * (3 * kd + 1);
    double y0[2] = {s.phi(1.0), std::pow((-kd + c1.to_double()) / den, 1 / (2 * kd))};
    auto traj = integrate_ode(
        [&](double w, std::span<const double> y, std::span<double> dy) {
          double v[3] = {w, y[0], y[1]};
          dy[0] = y[1];
          dy[1] = rhs(v);
        },
        {y0[0], y0[1]}, 1.0, 2.0, 1e-11);
    REQUIRE(traj.complete);
    double worst = 0;
    for (std::size_t i = 0; i < traj.s.size(); ++i)
      worst = std::max(worst, std::fabs(traj.y[i][0] - s.phi(traj.s[i])));
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("first integral for k = -1/3") {
  for (const auto& lam : kLams) CHECK(is_zero(first_integral_identity(Scalar(-1, 3), lam)).zero);
  for (const auto& lam : {Scalar(1), Scalar(3)}) {
    ExactParams p;
    p.lambda = lam;
    p.C2 = Scalar(1);
    auto s = exact_solution("4-16", p);
    Expr phi = *s.phi_expr;
    Expr w(sym_omega());
    Expr fi = w * pow(diff(phi, sym_omega()), Expr(Scalar(1, 3))) - w * w * phi / Expr(3 * lam);
    CHECK(is_zero(fi, omega_range(Scalar(1, 2), Scalar(3, 2))).zero);
    // And phi solves the case-iii equation itself.
    auto c = reduce_to_ode("iii", Scalar(-1, 3), lam);
    Expr ode = substitute(c.ode, {{sym_phi(0), phi},
                                  {sym_phi(1), diff(phi, sym_omega())},
                                  {sym_phi(2), diff(diff(phi, sym_omega()), sym_omega())}});
    CHECK(is_zero(ode, omega_range(Scalar(1, 2), Scalar(3, 2))).zero);
  }
  ExactParams bad;
  bad.k = Scalar(1);
  CHECK_THROWS_AS(exact_solution("4-16", bad), InvalidArgument);
  ExactParams ex;
  ex.C2 = Scalar(1);
  auto s = exact_solution("4-16", ex);
  CHECK(s.phi(1.0) == doctest::Approx(2 / std::sqrt(1 - 2.0 / 27)));
  CHECK_THROWS_AS(s.phi(2.0), DomainError);
}

TEST_CASE("separable family") {
  ExactParams p;
  auto s = exact_solution("4-11", p);
  for (double t : {0.0, 0.5, 1.0, 1.5})
    CHECK(s.phi(t) == doctest::Approx(1 / std::sqrt(100 - 64 * t)).epsilon(1e-13));
  CHECK_THROWS_AS(s.phi(2.0), DomainError);
  // u = r^2 phi(t) solves the radial equation with k = 1.
  auto rad = radial_reduce(Scalar(1));
  const auto& J = JetSpace::one();
  Expr u = *s.u_expr;
  Expr res = substitute(residual_expr(rad.pde), {{J.coord({J.t()}), diff(u, J.t())},
                                                 {J.coord({J.x(0)}), diff(u, J.x(0))},
                                                 {J.coord({J.x(0), J.x(0)}), diff(diff(u, J.x(0)), J.x(0))}});
  SamplerConfig cfg;
  cfg.ranges[J.t()] = {Scalar(0), Scalar(1)};
  CHECK(is_zero(res, cfg).zero);
}

TEST_CASE("hodograph in one dimension") {
  auto h = hodograph_1d(E("u"));
  CHECK(is_zero(h.linear.rhs - E("u_xx - x*u_x")).zero);
  CHECK(is_zero(hodograph_pullback(h, E("exp(-t)*u"))).zero);
  CHECK(is_zero(hodograph_pullback(h, E("exp(-2*t)*(u^2 - 1)"))).zero);
  CHECK_FALSE(is_zero(hodograph_pullback(h, E("exp(-t)*u^2"))).zero);
  auto h0 = hodograph_1d(Expr(0));
  CHECK(is_zero(hodograph_pullback(h0, E("u"))).zero);

  auto inv = invert_closed_form(E("exp(-t)*u"), -100, 100);
  CHECK(inv(0.5, 1.25) == doctest::Approx(std::exp(0.5) * 1.25).epsilon(1e-14));
  CHECK_THROWS_AS(inv(0.0, 1000.0), DomainError);

  std::vector<double> ug;
  for (int i = 0; i <= 400; ++i) ug.push_back(-2 + 4.0 * i / 400);
  auto g = invert_grid(
      [&](double t) {
        std::vector<double> w;
        for (double u : ug) w.push_back(std::exp(-t) * u);
        return w;
      },
      ug);
  CHECK(g(0.3, 0.5) == doctest::Approx(std::exp(0.3) * 0.5).epsilon(1e-9));
  auto bad = invert_grid([&](double) { return std::vector<double>(ug.size(), 1.0); }, ug);
  CHECK_THROWS_AS(bad(0.0, 1.0), InvalidArgument);
}

TEST_CASE("radial hodograph") {
  auto rh = radial_hodograph();
  CHECK(rh.radial.k == Scalar(-1));
  Expr V = E("exp(t)*sin(x)");
  const auto& J = JetSpace::one();
  // V solves V_t = -V_zz.
  Expr lin = diff(V, J.t()) + diff(diff(V, J.x(0)), J.x(0));
  CHECK(is_zero(lin).zero);
  SamplerConfig cfg;
  cfg.ranges[J.x(0)] = {Scalar(1, 10), Scalar(3, 2)};
  CHECK(is_zero(radial_hodograph_pullback(V), cfg).zero);
  CHECK_FALSE(is_zero(radial_hodograph_pullback(E("exp(t)*sin(x) + t")), cfg).zero);
  auto U = radial_hodograph_solution([](double t, double z) { return std::exp(t) * std::sin(z); }, 0, M_PI / 2);
  CHECK(U(0.5, 0.7) == doctest::Approx(std::asin(0.49 * std::exp(-0.5))).epsilon(1e-14));
  CHECK_THROWS_AS(U(0.0, 1.5), DomainError);
}
