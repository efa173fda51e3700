#include "gradsym/reduce.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <memory>

namespace gradsym {

namespace {

Expr S(const Scalar& s) { return Expr(s); }

constexpr double kQuadTol = 1e-12;

double integrate(const std::function<double(double)>& f, double a, double b) {
  if (a == b) return 0;
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  // A single panel first: on short intervals the relative criterion of the
  // adaptive routine sits below rounding and recurses to full depth.
  double err = 0;
  double v = GK::integrate(f, a, b, 0, kQuadTol, &err);
  if (err <= kQuadTol * std::max(1.0, std::fabs(v))) return v;
  return GK::integrate(f, a, b, 15, kQuadTol);
}

// Running integral of y from omega_ref, cached on a mesh around omega_ref.
struct QuadratureCache {
  std::function<double(double)> y;
  double ref = 1;
  std::vector<double> nodes;
  std::vector<double> values;

  void build(double lo, double hi, int n) {
    lo = std::min(lo, ref);
    hi = std::max(hi, ref);
    std::vector<double> mesh(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) mesh[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    // Walk outward from ref while the integrand stays defined.
    auto start = std::lower_bound(mesh.begin(), mesh.end(), ref) - mesh.begin();
    std::vector<std::pair<double, double>> up{{ref, 0.0}}, down;
    double acc = 0, prev = ref;
    for (auto i = start; i < n; ++i) {
      double m = mesh[static_cast<std::size_t>(i)];
      if (m <= prev) continue;
      try {
        acc += integrate(y, prev, m);
      } catch (const DomainError&) {
        break;
      }
      up.emplace_back(m, acc);
      prev = m;
    }
    acc = 0;
    prev = ref;
    for (auto i = start - 1; i >= 0; --i) {
      double m = mesh[static_cast<std::size_t>(i)];
      if (m >= prev) continue;
      try {
        acc -= integrate(y, m, prev);
      } catch (const DomainError&) {
        break;
      }
      down.emplace_back(m, acc);
      prev = m;
    }
    std::reverse(down.begin(), down.end());
    for (const auto& [m, v] : down) {
      nodes.push_back(m);
      values.push_back(v);
    }
    for (const auto& [m, v] : up) {
      nodes.push_back(m);
      values.push_back(v);
    }
  }

  double operator()(double w) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), w);
    std::size_t j;
    if (it == nodes.end())
      j = nodes.size() - 1;
    else if (it == nodes.begin())
      j = 0;
    else {
      j = static_cast<std::size_t>(it - nodes.begin());
      if (w - nodes[j - 1] < nodes[j] - w) --j;
    }
    return values[j] + integrate(y, nodes[j], w);
  }
};

}  // namespace

double ExactSolution::operator()(double t, std::span<const double> x) const {
  double r = x.size() == 1 ? x[0] : std::hypot(x[0], x[1]);
  return u(t, r);
}

Expr bernoulli_z(const Scalar& k, const Scalar& C1) {
  Expr w(sym_omega());
  Scalar den = 2 * (k + Scalar(1)) * (3 * k + Scalar(1));
  return (S(-k) * w * w + S(C1) * pow(w, S(-2 * k / (2 * k + Scalar(1))))) / S(den);
}

Expr bernoulli_linear_residual(const Scalar& k, const Expr& z) {
  ReductionCase c = reduce_to_ode("ii", k, Scalar(0));
  Expr y = pow(z, S(Scalar(1) / (2 * k)));
  Expr yp = diff(y, sym_omega());
  Expr ode = substitute(c.ode, {{sym_phi(1), y}, {sym_phi(2), yp}});
  return S(2 * k / (2 * k + Scalar(1))) * pow(y, S(2 * k - Scalar(1))) * ode;
}

ExactSolution bernoulli_closed_form(const Scalar& k, const Scalar& C1, const ExactParams& p) {
  if (k.is_zero() || k == Scalar(-1, 2) || k == Scalar(-1) || k == Scalar(-1, 3))
    throw InvalidArgument("k = " + k.str() + " is excluded for the quadrature family");
  ExactSolution s;
  s.family = "4-15";
  s.k = k;
  s.lambda = Scalar(0);
  s.C1 = C1;
  s.C2 = p.C2;
  const double kd = k.to_double(), c1 = C1.to_double(), c2 = p.C2.to_double();
  const double den = 2 * (kd + 1) * (3 * kd + 1);
  const double pe = -2 * kd / (2 * kd + 1);
  auto y = [=](double w) {
    if (!(w > 0)) throw DomainError("omega must be positive");
    double rad = (-kd * w * w + c1 * std::pow(w, pe)) / den;
    if (!(rad > 0)) throw DomainError("non-positive radicand at omega = " + std::to_string(w));
    return std::pow(rad, 1 / (2 * kd));
  };
  auto cache = std::make_shared<QuadratureCache>();
  cache->y = y;
  cache->ref = p.omega_ref;
  y(p.omega_ref);
  cache->build(p.mesh_lo, p.mesh_hi, std::max(p.mesh_n, 2));
  s.phi = [cache, c2](double w) { return c2 + (*cache)(w); };
  const double a = 1 / (2 * (kd + 1));
  s.u = [phi = s.phi, a](double t, double r) {
    if (!(t > 0)) throw DomainError("t must be positive");
    return phi(r * std::pow(t, -a));
  };

  // Elementary cases: C1 = 0 (power integrand) and k = 1/2 (exponent 1).
  Expr w(sym_omega());
  Expr ref = S(Scalar::approximate(p.omega_ref, 1000000));
  if (C1.is_zero()) {
    Scalar c = -k / (2 * (k + Scalar(1)) * (3 * k + Scalar(1)));
    Scalar e = (k + Scalar(1)) / k;
    Expr coef = pow(S(c), S(Scalar(1) / (2 * k))) * S(k / (k + Scalar(1)));
    s.phi_expr = S(p.C2) + coef * (pow(w, S(e)) - pow(ref, S(e)));
  } else if (k == Scalar(1, 2)) {
    Expr F = (S(Scalar(-1, 6)) * pow(w, Expr(3)) + S(2 * C1) * pow(w, S(Scalar(1, 2)))) / S(Scalar(15, 2));
    Expr Fr = substitute(F, {{sym_omega(), ref}});
    s.phi_expr = S(p.C2) + F - Fr;
  }
  if (s.phi_expr) {
    const auto& J = JetSpace::one();
    Expr om = Expr(J.x(0)) * pow(Expr(J.t()), S(-Scalar(1) / (2 * (k + Scalar(1)))));
    s.u_expr = substitute(*s.phi_expr, {{sym_omega(), om}});
  }
  return s;
}

std::vector<std::string> exact_families() { return {"4-15", "4-16", "4-17", "4-11"}; }

namespace {

ExactSolution minus_third(const std::string& family, const ExactParams& p) {
  Scalar k = p.k.value_or(Scalar(-1, 3));
  if (k != Scalar(-1, 3)) throw InvalidArgument("family " + family + " needs k = -1/3");
  if (p.lambda.is_zero()) throw InvalidArgument("family " + family + " needs lam != 0");
  if (p.sign != 1 && p.sign != -1) throw InvalidArgument("sign must be +1 or -1");
  if (p.variant != "derived" && p.variant != "printed")
    throw InvalidArgument("variant must be derived or printed: " + p.variant);
  ExactSolution s;
  s.family = family;
  s.k = k;
  s.lambda = p.lambda;
  s.C2 = p.C2;
  s.sign = p.sign;
  s.variant = family == "4-17" ? p.variant : "derived";
  const Scalar l = p.lambda;
  const Scalar c = Scalar(2) / (Scalar(27) * l * l * l);  // 2 (3 lam)^-3
  const double cd = c.to_double(), c2 = p.C2.to_double(), ld = l.to_double();
  const double sg = p.sign;
  s.phi = [=](double w) {
    double rad = c2 - cd * w * w * w * w;
    if (!(rad > 0)) throw DomainError("non-positive radicand at omega = " + std::to_string(w));
    return sg * 2 / std::sqrt(rad);
  };
  // exp(-4t/(3 lam)) from the ansatz of case iii, exp(-2t/(3 lam)) as printed.
  const double rate = s.variant == "derived" ? 4.0 : 2.0;
  s.u = [=](double t, double r) {
    double rad = c2 * std::exp(-rate * t / (3 * ld)) - cd * r * r * r * r;
    if (!(rad > 0)) throw DomainError("non-positive radicand at t = " + std::to_string(t));
    return sg * 2 / std::sqrt(rad);
  };
  Expr w(sym_omega());
  s.phi_expr = S(Scalar(2 * p.sign)) / sqrt(S(p.C2) - S(c) * pow(w, Expr(4)));
  const auto& J = JetSpace::one();
  Expr t(J.t()), x(J.x(0));
  Scalar rr = s.variant == "derived" ? Scalar(4) : Scalar(2);
  s.u_expr = S(Scalar(2 * p.sign)) / sqrt(S(p.C2) * exp(S(-rr / (3 * l)) * t) - S(c) * pow(x, Expr(4)));
  return s;
}

ExactSolution separable(const ExactParams& p) {
  Scalar k = p.k.value_or(Scalar(1));
  if (k.is_zero() || k == Scalar(-1) || k == Scalar(-1, 2)) throw InvalidArgument("k = " + k.str() + " is excluded");
  if (!(p.phi0 > Scalar(0))) throw InvalidArgument("phi0 must be positive");
  ExactSolution s;
  s.family = "4-11";
  s.k = k;
  // phi' = A phi^(1+2k)  =>  phi^(-2k) = phi0^(-2k) - 2k A t.
  ReductionCase rc = reduce_to_ode("iii-l0", k);
  std::map<Symbol, long double> unit{{sym_phi(0), 1.0L}};
  const double A = static_cast<double>(eval_float(rc.rhs, unit));
  const double kd = k.to_double(), p0 = p.phi0.to_double();
  s.phi = [=](double t) {
    double base = std::pow(p0, -2 * kd) - 2 * kd * A * t;
    if (!(base > 0)) throw DomainError("past the blow-up time at t = " + std::to_string(t));
    return std::pow(base, -1 / (2 * kd));
  };
  const double e = (kd + 1) / kd;
  s.u = [phi = s.phi, e](double t, double r) {
    if (!(r > 0)) throw DomainError("r must be positive");
    return std::pow(r, e) * phi(t);
  };
  const auto& J = JetSpace::one();
  Expr t(J.t()), x(J.x(0));
  Expr Ae = substitute(rc.rhs, {{sym_phi(0), Expr(1)}});
  Expr base = pow(S(p.phi0), S(-2 * k)) - S(2 * k) * Ae * t;
  s.phi_expr = pow(base, S(-Scalar(1) / (2 * k)));
  s.u_expr = pow(x, S((k + Scalar(1)) / k)) * *s.phi_expr;
  return s;
}

}  // namespace

ExactSolution exact_solution(const std::string& family, const ExactParams& p) {
  if (family == "4-15") return bernoulli_closed_form(p.k.value_or(Scalar(-2)), p.C1, p);
  if (family == "4-16" || family == "4-17") return minus_third(family, p);
  if (family == "4-11") return separable(p);
  throw InvalidArgument("unknown family: " + family);
}

}  // namespace gradsym
