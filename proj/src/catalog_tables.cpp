#include "gradsym/catalog.hpp"

#include <utility>

namespace gradsym {

namespace {

Expr P(const char* s) {
  JetSpace::two();
  return parse(s);
}

NamedField g1(const char* name, const char* xi0, const char* xi1, const char* eta) {
  return {name, VectorField{{P(xi0), P(xi1)}, P(eta)}, true};
}

NamedField g2(const char* name, const char* xi0, const char* xi1, const char* xi2, const char* eta) {
  return {name, VectorField{{P(xi0), P(xi1), P(xi2)}, P(eta)}, true};
}

const std::vector<Scalar> kSamples{Scalar(-3), Scalar(-1, 3), Scalar(1, 2), Scalar(2), Scalar(3)};
const std::vector<Scalar> kSigns{Scalar(1), Scalar(-1)};
const std::vector<Scalar> kLambda{Scalar(-2), Scalar(1), Scalar(3)};
const std::vector<Scalar> kGamma{Scalar(-1), Scalar(1, 2), Scalar(2)};
const std::vector<Scalar> kPower{Scalar(-1), Scalar(1, 2), Scalar(3)};

SymmetryCase row1(const char* row, const char* D, const char* Q, std::vector<NamedField> gens) {
  SymmetryCase c;
  c.table = "T1";
  c.row = row;
  c.pde = PdeSpec::quasilinear(P(D), P(Q));
  c.generators = std::move(gens);
  c.principal_size = 2;
  c.expected_dim = 2 + c.generators.size();
  return c;
}

SymmetryCase row2(const char* table, const char* row, const char* D, const char* Q,
                  std::vector<NamedField> gens) {
  SymmetryCase c;
  c.table = table;
  c.row = row;
  c.pde = PdeSpec::divergence(P(D), P(Q));
  c.generators = std::move(gens);
  c.principal_size = 4;
  c.expected_dim = 4 + c.generators.size();
  return c;
}

std::vector<SymmetryCase> table1() {
  std::vector<SymmetryCase> t;
  t.push_back(row1("1", "D(u_x)", "u^(-1)", {g1("X3", "2*t", "x", "u")}));
  t.push_back(row1("2", "D(u_x)", "u", {g1("X3", "0", "0", "exp(t)")}));

  auto r3 = row1("3", "u_x^k", "e1*exp(-u)", {g1("X3", "(k + 2)*t", "x", "k + 2")});
  r3.params = {{"k", kSamples}, {"e1", kSigns}};
  t.push_back(r3);

  auto r4 = row1("4", "u_x^k", "e1*u^m", {g1("X3", "(1 - m)*t", "(k + 1 - m)/(k + 2)*x", "u")});
  r4.params = {{"k", kSamples}, {"m", kPower}, {"e1", kSigns}};
  r4.constraints = {"m != 1", "m != 2"};
  t.push_back(r4);

  auto r5 = row1("5", "u_x^k", "e1*u^(k + 1) + e2*u",
                 {g1("X3", "exp(-k*e2*t)", "0", "e2*exp(-k*e2*t)*u")});
  r5.params = {{"k", kSamples}, {"e1", kSigns}, {"e2", kSigns}};
  r5.constraints = {"k != 1", "k != -1"};
  t.push_back(r5);

  // The displayed source column reads Q = u while the generators carry e1.
  for (auto [reading, Q] : {std::pair{"Q=e1*u", "e1*u"}, std::pair{"Q=u", "u"}}) {
    auto r6 = row1("6", "(u_x + g)^(-1)", Q,
                   {g1("X3", "0", "0", "exp(e1*t)"),
                    g1("X4", "exp(e1*t)", "0", "e1*exp(e1*t)*(u + g*x)")});
    r6.reading = reading;
    r6.adopted = r6.reading == "Q=e1*u";
    r6.params = {{"g", kGamma}, {"e1", kSigns}};
    r6.constraints = {"g != 0"};
    t.push_back(r6);
  }

  auto r7 = row1("7", "u_x", "e1*u^2",
                 {g1("X3", "t", "0", "-u"), g1("X4", "t^2", "0", "-(2*t*u + e1)")});
  r7.params = {{"e1", kSigns}};
  t.push_back(r7);

  auto r8 = row1("8", "u_x", "e1*u^2 + e2",
                 {g1("X3", "exp(-2*t)", "0", "2*exp(-2*t)*(u - e1)"),
                  g1("X4", "exp(2*t)", "0", "-2*exp(2*t)*(u + e1)")});
  r8.params = {{"e1", kSigns}, {"e2", kSigns}};
  r8.constraints = {"e1*e2 = -1"};
  t.push_back(r8);

  auto r9 = row1("9", "u_x", "e1*u^2 + e2",
                 {g1("X3", "cos(2*t)", "0", "2*(sin(2*t)*u + e1*cos(2*t))"),
                  g1("X4", "sin(2*t)", "0", "-2*(cos(2*t)*u - e1*sin(2*t))")});
  r9.params = {{"e1", kSigns}, {"e2", kSigns}};
  r9.constraints = {"e1*e2 = 1"};
  t.push_back(r9);

  auto r10 = row1("10", "u_x^k", "e2*u",
                  {g1("X3", "0", "x", "(1 + 2/k)*u"),
                   g1("X4", "exp(-k*e2*t)", "0", "e2*exp(-k*e2*t)*u"),
                   g1("X5", "0", "0", "exp(e2*t)")});
  r10.params = {{"k", kSamples}, {"e2", kSigns}};
  t.push_back(r10);
  return t;
}

std::vector<SymmetryCase> table2() {
  std::vector<SymmetryCase> t;
  t.push_back(row2("T2", "1", "D(W)", "u^(-1)", {g2("X5", "2*t", "x1", "x2", "u")}));
  t.push_back(row2("T2", "2", "D(W)", "u", {g2("X5", "0", "0", "0", "exp(t)")}));

  auto r3 = row2("T2", "3", "W^k", "e1*exp(-u)",
                 {g2("X5", "2*(k + 1)*t", "x1", "x2", "2*(k + 1)")});
  r3.params = {{"k", kSamples}, {"e1", kSigns}};
  t.push_back(r3);

  auto r4 = row2("T2", "4", "W^k", "e1*u^m",
                 {g2("X5", "2*t", "(m - 2*k - 1)/(m - 2*k - 1 + k*(m + 1))*x1",
                     "(m - 2*k - 1)/(m - 2*k - 1 + k*(m + 1))*x2",
                     "-2*(k + 1)/(m - 2*k - 1 + k*(m + 1))*u")});
  r4.params = {{"k", kSamples}, {"m", kPower}, {"e1", kSigns}};
  r4.constraints = {"m != 0", "m != 1", "m != 2"};
  t.push_back(r4);

  auto r5 = row2("T2", "5", "W^k", "e1*u^(2*k + 1) + e2*u",
                 {g2("X5", "exp(-2*k*e2*t)", "0", "0", "e2*exp(-2*k*e2*t)*u")});
  r5.params = {{"k", kSamples}, {"e1", kSigns}, {"e2", kSigns}};
  r5.constraints = {"k != 1/2", "k != -1/2"};
  t.push_back(r5);

  auto r6 = row2("T2", "6", "W^(1/2)", "e1*u^2",
                 {g2("X5", "t", "0", "0", "-u"), g2("X6", "t^2", "0", "0", "-(2*t*u + e1)")});
  r6.params = {{"e1", kSigns}};
  t.push_back(r6);

  auto r7 = row2("T2", "7", "W^(1/2)", "e1*u^2 + e2",
                 {g2("X5", "exp(-2*t)", "0", "0", "2*exp(-2*t)*(u - e1)"),
                  g2("X6", "exp(2*t)", "0", "0", "-2*exp(2*t)*(u + e1)")});
  r7.params = {{"e1", kSigns}, {"e2", kSigns}};
  r7.constraints = {"e1*e2 = -1"};
  t.push_back(r7);

  auto r8 = row2("T2", "8", "W^(1/2)", "e1*u^2 + e2",
                 {g2("X5", "cos(2*t)", "0", "0", "2*(sin(2*t)*u + e1*cos(2*t))"),
                  g2("X6", "sin(2*t)", "0", "0", "-2*(cos(2*t)*u - e1*sin(2*t))")});
  r8.params = {{"e1", kSigns}, {"e2", kSigns}};
  r8.constraints = {"e1*e2 = 1"};
  t.push_back(r8);

  auto r9 = row2("T2", "9", "W^k", "e2*u",
                 {g2("X5", "0", "x1", "x2", "(1 + 1/k)*u"),
                  g2("X6", "exp(-2*k*e2*t)", "0", "0", "e2*exp(-2*k*e2*t)*u"),
                  g2("X7", "0", "0", "0", "exp(e2*t)")});
  r9.params = {{"k", kSamples}, {"e2", kSigns}};
  t.push_back(r9);
  return t;
}

std::vector<SymmetryCase> table3() {
  std::vector<SymmetryCase> t;
  auto dil = [] { return g2("X5", "0", "x1", "x2", "0"); };
  t.push_back(row2("T3", "1", "W^(-1)", "Q(u)", {dil()}));

  auto r2 = row2("T3", "2", "W^(-1)", "lam/u + e2*u",
                 {dil(), g2("X6", "exp(2*e2*t)", "0", "0", "e2*exp(2*e2*t)*u")});
  r2.params = {{"lam", kLambda}, {"e2", kSigns}};
  t.push_back(r2);

  auto r3 = row2("T3", "3", "W^(-1)", "lam/u", {dil(), g2("X6", "2*t", "0", "0", "u")});
  r3.params = {{"lam", kLambda}};
  t.push_back(r3);

  auto r4 = row2("T3", "4", "W^(-1)", "lam*u",
                 {dil(), g2("X6", "exp(2*lam*t)", "0", "0", "lam*exp(2*lam*t)*u"),
                  g2("X7", "0", "0", "0", "exp(lam*t)")});
  r4.params = {{"lam", kLambda}};
  t.push_back(r4);
  return t;
}

SymmetryCase principal_case(const char* row, PdeSpec pde, std::vector<NamedField> gens) {
  SymmetryCase c;
  c.table = row;
  c.row = "1";
  c.pde = std::move(pde);
  c.generators = std::move(gens);
  c.principal_size = c.generators.size();
  c.includes_principal = true;
  c.expected_dim = c.generators.size();
  return c;
}

std::vector<NamedField> no_source_algebra() {
  auto a = principal_algebra("2d");
  a.push_back(g2("X5", "0", "0", "0", "1"));
  a.push_back(g2("X6", "2*t", "x1", "x2", "u"));
  return a;
}

}  // namespace

std::vector<NamedField> principal_algebra(const std::string& which) {
  if (which == "1d") return {g1("X1", "1", "0", "0"), g1("X2", "0", "1", "0")};
  if (which == "2d")
    return {g2("X1", "1", "0", "0", "0"), g2("X2", "0", "1", "0", "0"), g2("X3", "0", "0", "1", "0"),
            g2("X4", "0", "x2", "-x1", "0")};
  if (which == "noQ") return no_source_algebra();
  throw InvalidArgument("unknown principal algebra: " + which);
}

std::vector<std::string> table_ids() {
  return {"T1", "T2", "T3", "principal-1d", "principal-2d", "principal-noQ", "theorem9", "corollary"};
}

std::vector<SymmetryCase> cases(const std::string& table) {
  if (table == "T1") return table1();
  if (table == "T2") return table2();
  if (table == "T3") return table3();
  if (table == "principal-1d")
    return {principal_case("principal-1d", PdeSpec::generic(1), principal_algebra("1d"))};
  if (table == "principal-2d")
    return {principal_case("principal-2d", PdeSpec::generic(2), principal_algebra("2d"))};
  // With Q = 0 the translation in u is admitted, so the control adds t d_u instead.
  Perturbation in_time{0, -1, P("t")};
  if (table == "principal-noQ") {
    auto c = principal_case("principal-noQ", PdeSpec::divergence(P("D(W)"), Expr(0)), no_source_algebra());
    c.negative = in_time;
    return {c};
  }
  if (table == "theorem9") {
    auto gens = no_source_algebra();
    gens.push_back(g2("X7", "2*k*t", "0", "0", "-u"));
    auto c = principal_case("theorem9", PdeSpec::divergence(P("W^k"), Expr(0)), gens);
    c.principal_size = 6;
    c.params = {{"k", {Scalar(-3), Scalar(1, 2), Scalar(2)}}};
    c.negative = in_time;
    return {c};
  }
  if (table == "corollary") {
    std::vector<SymmetryCase> out;
    int row = 1;
    for (const char* D : {"exp(-W/D0)", "(1 + W/D0)^(-1)"}) {
      auto gens = no_source_algebra();
      auto x7 = g2("X7", "2*k*t", "0", "0", "-u");
      x7.admitted = false;
      gens.push_back(x7);
      auto c = principal_case("corollary", PdeSpec::divergence(P(D), Expr(0)), gens);
      c.row = std::to_string(row++);
      c.principal_size = 6;
      c.expected_dim = 6;
      c.params = {{"k", {Scalar(-3), Scalar(1, 2), Scalar(2)}}, {"D0", {Scalar(1, 2), Scalar(1), Scalar(2)}}};
      c.negative = in_time;
      c.note = "the power-law operator X7 is not admitted";
      out.push_back(c);
    }
    return out;
  }
  throw InvalidArgument("unknown table id: " + table);
}

}  // namespace gradsym
