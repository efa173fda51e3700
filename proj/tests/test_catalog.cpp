#include "doctest.h"

#include "gradsym/catalog.hpp"

#include <chrono>
#include <iostream>

using namespace gradsym;

namespace {

Expr E(const char* s) {
  JetSpace::two();
  return parse(s);
}

const SymmetryCase& find(const std::vector<SymmetryCase>& cs, const std::string& row,
                         const std::string& reading = "") {
  for (const auto& c : cs)
    if (c.row == row && c.reading == reading) return c;
  throw InvalidArgument("no row " + row);
}

}  // namespace

TEST_CASE("tables have the documented sizes") {
  CHECK(cases("T1").size() == 11);  // row 6 under two readings
  CHECK(cases("T2").size() == 9);
  CHECK(cases("T3").size() == 4);
  auto t9 = cases("theorem9");
  REQUIRE(t9.size() == 1);
  CHECK(t9[0].generators.size() == 7);
  CHECK_THROWS_AS(cases("T4"), InvalidArgument);
}

TEST_CASE("catalog rows as listed") {
  auto t1 = cases("T1");
  const auto& r6 = find(t1, "6", "Q=e1*u");
  CHECK(r6.pde.D == E("(u_x + g)^(-1)"));
  CHECK(r6.generators.size() == 2);
  CHECK(r6.generators[1].field.eta == E("e1*exp(e1*t)*(u + g*x)"));
  CHECK(r6.constraints == std::vector<std::string>{"g != 0"});

  auto t3 = cases("T3");
  const auto& r3 = find(t3, "3");
  CHECK(r3.pde.D == E("W^(-1)"));
  CHECK(r3.pde.Q == E("lam/u"));
  CHECK(r3.generators[0].field.xi[1] == E("x1"));
  CHECK(r3.generators[1].field.xi[0] == E("2*t"));
  CHECK(r3.expected_dim == 6);
}

TEST_CASE("parameter samples respect the constraints") {
  auto t1 = cases("T1");
  for (const auto& a : find(t1, "5").assignments()) CHECK(a.at("k").abs() != Scalar(1));
  auto r8 = find(t1, "8").assignments();
  CHECK(r8.size() == 2);
  for (const auto& a : r8) CHECK(a.at("e1") * a.at("e2") == Scalar(-1));
  auto r4 = find(cases("T2"), "4").assignments();
  CHECK(r4.size() == 30);
  auto bad = find(t1, "4");
  CHECK_THROWS_AS(verify_case(bad, {}, std::vector<Assignment>{{{"k", Scalar(2)}, {"m", Scalar(2)}, {"e1", Scalar(1)}}}),
                  InvalidArgument);
}

TEST_CASE("selected rows verify") {
  auto t1 = cases("T1");
  auto r9 = verify_case(find(t1, "9"));
  CHECK(r9.pass);
  CHECK(r9.dimension_ok);

  auto r7 = verify_case(find(t1, "7"));
  CHECK(r7.pass);
  CHECK(r7.min_negative_residual > kNegativeFloor);

  auto t2 = cases("T2");
  auto r4 = verify_case(find(t2, "4"), {},
                        std::vector<Assignment>{{{"k", Scalar(2)}, {"m", Scalar(3)}, {"e1", Scalar(1)}}});
  CHECK(r4.pass);
}

TEST_CASE("perturbed generator of T1 row 7 is rejected") {
  auto c = find(cases("T1"), "7");
  c.generators[1].field.eta = E("-(2*t*u + e1 + 1)");
  auto r = verify_case(c);
  CHECK_FALSE(r.pass);
  CHECK(r.first_failure.find("X4") != std::string::npos);
}

TEST_CASE("row 6 readings") {
  auto t1 = cases("T1");
  auto a = verify_case(find(t1, "6", "Q=e1*u"));
  auto b = verify_case(find(t1, "6", "Q=u"));
  CHECK(a.pass);
  CHECK_FALSE(b.pass);
  // The printed reading only fails at e1 = -1.
  for (const auto& s : b.samples) CHECK(s.pass == (s.params.at("e1") == Scalar(1)));
}

TEST_CASE("principal algebras and the power-law extension") {
  for (const char* t : {"principal-1d", "principal-2d", "principal-noQ", "theorem9"}) {
    CAPTURE(t);
    for (const auto& c : cases(t)) CHECK(verify_case(c).pass);
  }
  for (const auto& c : cases("corollary")) {
    auto r = verify_case(c);
    CHECK(r.pass);
    for (const auto& s : r.samples) {
      CHECK(s.passed.back());
      CHECK(s.residuals.back() > kNegativeFloor);
    }
  }
}

TEST_CASE("linear-side solutions give admitted w d_x") {
  auto r0 = verify_theorem1(Expr(0), {E("u"), E("u^2 + 2*t"), E("u^3 + 6*t*u")});
  CHECK(r0.pass);
  auto r1 = verify_theorem1(E("u"), {E("exp(-t)*u"), E("exp(-2*t)*(u^2 - 1)"), E("exp(-3*t)*(u^3 - 3*u)")});
  CHECK(r1.pass);
  auto bad = verify_theorem1(Expr(0), {E("u^2")});
  CHECK_FALSE(bad.pass);
  CHECK_FALSE(bad.samples[0].solves_linear);
  CHECK_THROWS_AS(verify_theorem1(Expr(0), {E("x")}), InvalidArgument);
}

TEST_CASE("algebra structure") {
  auto noq = cases("principal-noQ")[0];
  auto rep = verify_algebra_structure(noq, {});
  CHECK(rep.closed);
  bool saw16 = false, saw24 = false, saw15 = false;
  for (const auto& b : rep.brackets) {
    if (b.a == "X1" && b.b == "X6") {
      saw16 = true;
      CHECK(b.coefficients == std::map<std::string, Scalar>{{"X1", Scalar(2)}});
    }
    if (b.a == "X2" && b.b == "X4") {
      saw24 = true;
      CHECK(b.coefficients == std::map<std::string, Scalar>{{"X3", Scalar(-1)}});
    }
    if (b.a == "X1" && b.b == "X5") {
      saw15 = true;
      CHECK(b.coefficients.empty());
    }
  }
  CHECK(saw16);
  CHECK(saw24);
  CHECK(saw15);

  for (const char* t : {"T1", "T2", "T3", "theorem9"})
    for (const auto& c : cases(t)) {
      if (!c.reading.empty() && c.reading != "Q=e1*u") continue;
      CAPTURE(c.id());
      auto as = c.assignments();
      CHECK(verify_algebra_structure(c, as.front()).closed);
    }
}

TEST_CASE("catalog JSON round trip") {
  for (const char* t : {"T1", "T3", "corollary"}) {
    auto cs = cases(t);
    auto back = cases_from_json(cases_to_json(cs));
    REQUIRE(back.size() == cs.size());
    for (std::size_t i = 0; i < cs.size(); ++i) {
      CHECK(back[i].id() == cs[i].id());
      CHECK(back[i].pde.D == cs[i].pde.D);
      CHECK(back[i].pde.Q == cs[i].pde.Q);
      CHECK(back[i].params == cs[i].params);
      CHECK(back[i].generators.size() == cs[i].generators.size());
      for (std::size_t g = 0; g < cs[i].generators.size(); ++g) {
        CHECK(back[i].generators[g].field.eta == cs[i].generators[g].field.eta);
        CHECK(back[i].generators[g].admitted == cs[i].generators[g].admitted);
      }
      CHECK(back[i].negative.has_value() == cs[i].negative.has_value());
    }
  }
  CHECK_THROWS_AS(cases_from_json("{\"cases\": [}"), ParseError);
}
