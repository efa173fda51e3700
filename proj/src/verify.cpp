#include "gradsym/catalog.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace gradsym {

namespace {

VectorField perturbed(const VectorField& X, const Perturbation& p) {
  VectorField Y = X;
  if (p.slot < 0)
    Y.eta = Y.eta + p.add;
  else
    Y.xi.at(static_cast<std::size_t>(p.slot)) = Y.xi.at(static_cast<std::size_t>(p.slot)) + p.add;
  return Y;
}

std::string describe(const Witness& w) {
  std::string s = "residual " + std::to_string(w.residual) + " at";
  for (const auto& [n, v] : w.point) s += " " + n + "=" + std::to_string(v);
  return s;
}

std::string describe(const Assignment& a) {
  std::string s;
  for (const auto& [n, v] : a) s += (s.empty() ? "" : ", ") + n + "=" + v.str();
  return s.empty() ? "no parameters" : s;
}

}  // namespace

VerificationReport verify_case(const SymmetryCase& c, const SamplerConfig& cfg,
                               std::optional<std::vector<Assignment>> samples) {
  VerificationReport r;
  r.case_id = c.id();
  r.reading = c.reading;
  r.seed = cfg.seed;
  std::size_t admitted = 0;
  for (const auto& g : c.generators) admitted += g.admitted ? 1 : 0;
  r.dimension_ok = (c.includes_principal ? admitted : c.principal_size + admitted) == c.expected_dim;

  std::vector<Assignment> as = samples ? *samples : c.assignments();
  for (const auto& a : as)
    if (!c.satisfies(a)) throw InvalidArgument("sample violates the constraints of " + c.id() + ": " + describe(a));

  bool all = r.dimension_ok;
  if (!r.dimension_ok) r.first_failure = "generator count does not match the algebra dimension";
  r.min_negative_residual = std::numeric_limits<double>::infinity();
  for (const auto& a : as) {
    SampleResult s;
    s.params = a;
    PdeSpec pde = instantiate(c.pde, a);
    bool ok = true;
    for (const auto& g : c.generators) {
      auto rep = check_invariance(pde, instantiate(g.field, a), cfg);
      bool pass = g.admitted ? rep.pass
                             : (!rep.pass && rep.verdict.max_abs_residual > kNegativeFloor);
      s.generator_names.push_back(g.name);
      s.residuals.push_back(g.admitted ? rep.verdict.max_residual : rep.verdict.max_abs_residual);
      s.passed.push_back(pass);
      s.exact.push_back(rep.verdict.exact);
      s.witnesses.push_back(rep.verdict.witness);
      if (g.admitted) r.max_residual = std::max(r.max_residual, rep.verdict.max_residual);
      if (!pass) {
        ok = false;
        if (r.first_failure.empty())
          r.first_failure = g.name + " (" + describe(a) + "): " +
                            (rep.verdict.witness ? describe(*rep.verdict.witness)
                                                 : std::string("operator unexpectedly admitted"));
      }
    }
    if (c.negative && !c.generators.empty()) {
      const auto& g = c.generators.at(c.negative->generator);
      auto rep = check_invariance(pde, perturbed(instantiate(g.field, a), *c.negative), cfg);
      s.negative_residual = rep.pass ? 0.0 : rep.verdict.max_abs_residual;
      s.negative_failed = !rep.pass && s.negative_residual > kNegativeFloor;
      r.min_negative_residual = std::min(r.min_negative_residual, s.negative_residual);
      if (!s.negative_failed) {
        ok = false;
        if (r.first_failure.empty())
          r.first_failure = "negative control for " + g.name + " (" + describe(a) + ") was not rejected";
      }
    }
    s.pass = ok;
    all = all && ok;
    r.samples.push_back(std::move(s));
  }
  if (!c.negative) r.min_negative_residual = 0;
  r.pass = all;
  return r;
}

Expr theorem1_linear_residual(const Expr& Q, const Expr& w) {
  const auto& J = JetSpace::one();
  Symbol t = J.t(), u = J.u();
  return diff(w, t) - diff(diff(w, u), u) + Q * diff(w, u);
}

Theorem1Report verify_theorem1(const Expr& Q, const std::vector<Expr>& ws, const SamplerConfig& cfg) {
  const auto& J = JetSpace::one();
  Theorem1Report r;
  r.Q = Q;
  r.pass = !ws.empty();
  PdeSpec pde = PdeSpec::quasilinear(pow(Expr(J.coord({J.x(0)})), Expr(-2)), Q);
  for (const auto& w : ws) {
    Theorem1Sample s;
    s.w = w;
    for (Symbol sym : w.free_symbols())
      if (!(sym == J.t()) && !(sym == J.u()))
        throw InvalidArgument("w must depend on t and u only: " + w.str());
    s.solves_linear = is_zero(theorem1_linear_residual(Q, w), cfg).zero;
    if (s.solves_linear) {
      auto rep = check_invariance(pde, VectorField{{Expr(0), w}, Expr(0)}, cfg);
      s.invariant = rep.pass;
      s.residual = rep.verdict.max_residual;
    }
    r.pass = r.pass && s.solves_linear && s.invariant;
    r.samples.push_back(s);
  }
  return r;
}

namespace {

std::vector<Expr> components(const VectorField& X) {
  std::vector<Expr> c = X.xi;
  c.push_back(X.eta);
  return c;
}

}  // namespace

AlgebraReport verify_algebra_structure(const std::vector<NamedField>& basis, const JetSpace& jet,
                                       const SamplerConfig& cfg) {
  AlgebraReport rep;
  for (const auto& b : basis) rep.basis.push_back(b.name);
  const std::size_t n = basis.size();
  std::vector<Symbol> vars = jet.bases();
  vars.push_back(jet.u());

  // Evaluation points shared by all brackets.
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> coord(0.5, 2.0);
  const int npts = 16;
  std::vector<std::map<Symbol, long double>> pts(npts);
  for (auto& p : pts)
    for (Symbol v : vars) p[v] = coord(rng);

  const std::size_t ncomp = vars.size();
  Eigen::MatrixXd A(npts * ncomp, n);
  for (std::size_t b = 0; b < n; ++b) {
    auto comps = components(basis[b].field);
    for (int p = 0; p < npts; ++p)
      for (std::size_t k = 0; k < ncomp; ++k)
        A(p * ncomp + k, b) = static_cast<double>(eval_float(comps[k], pts[p]));
  }
  auto solver = A.completeOrthogonalDecomposition();

  rep.closed = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Bracket br;
      br.a = basis[i].name;
      br.b = basis[j].name;
      VectorField C = commutator(basis[i].field, basis[j].field, jet);
      auto cc = components(C);
      Eigen::VectorXd rhs(npts * ncomp);
      for (int p = 0; p < npts; ++p)
        for (std::size_t k = 0; k < ncomp; ++k)
          rhs(p * ncomp + k) = static_cast<double>(eval_float(cc[k], pts[p]));
      Eigen::VectorXd coef = solver.solve(rhs);
      VectorField combo = VectorField::zero(jet);
      for (std::size_t b = 0; b < n; ++b) {
        double v = std::fabs(coef(b)) < 1e-9 ? 0.0 : coef(b);
        Scalar s = Scalar::approximate(v, 1000);
        if (!s.is_zero()) br.coefficients[basis[b].name] = s;
        combo = combo + Expr(s) * basis[b].field;
      }
      br.in_span = true;
      auto diff_comps = components(C - combo);
      for (const auto& d : diff_comps) {
        auto v = is_zero(d, cfg);
        br.residual = std::max(br.residual, v.max_residual);
        br.in_span = br.in_span && v.zero;
      }
      rep.closed = rep.closed && br.in_span;
      rep.brackets.push_back(std::move(br));
    }
  return rep;
}

AlgebraReport verify_algebra_structure(const SymmetryCase& c, const Assignment& a, const SamplerConfig& cfg) {
  std::vector<NamedField> basis;
  if (!c.includes_principal) basis = principal_algebra(c.pde.dim == 1 ? "1d" : "2d");
  for (const auto& g : c.generators)
    if (g.admitted) basis.push_back({g.name, instantiate(g.field, a), true});
  return verify_algebra_structure(basis, c.pde.jet(), cfg);
}

}  // namespace gradsym
