#include "gradsym/jet.hpp"

#include "gradsym/sample.hpp"

#include <algorithm>
#include <cmath>

namespace gradsym {

JetSpace::JetSpace(std::string dependent, std::vector<std::string> bases, int max_order)
    : max_order_(max_order) {
  Symbol::register_jet_space(dependent, bases, max_order);
  for (const auto& b : bases) bases_.push_back(Symbol::intern(b, SymbolKind::Base));
  u_ = *Symbol::lookup(dependent);
}

const JetSpace& JetSpace::one() {
  static const JetSpace j("u", {"t", "x"}, 2);
  return j;
}

const JetSpace& JetSpace::two() {
  static const JetSpace j("u", {"t", "x1", "x2"}, 2);
  return j;
}

const JetSpace& JetSpace::of_dim(int n) {
  if (n == 1) return one();
  if (n == 2) return two();
  throw InvalidArgument("space dimension must be 1 or 2");
}

Symbol JetSpace::derive(Symbol jet, Symbol base) const {
  if (jet.order() + 1 > max_order_)
    throw OrderOverflow("derivative of " + jet.name() + " along " + base.name() +
                        " exceeds the jet order");
  auto c = Symbol::jet_child(jet, base);
  if (!c) throw OrderOverflow("no jet coordinate for " + jet.name() + " along " + base.name());
  return *c;
}

Symbol JetSpace::coord(const std::vector<Symbol>& index) const {
  Symbol s = u_;
  for (Symbol b : index) s = derive(s, b);
  return s;
}

std::vector<Symbol> JetSpace::coords(int order) const {
  std::vector<Symbol> out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(order), 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t from) {
    if (pos == idx.size()) {
      std::vector<Symbol> ix;
      for (auto i : idx) ix.push_back(bases_[i]);
      out.push_back(coord(ix));
      return;
    }
    for (std::size_t i = from; i < bases_.size(); ++i) {
      idx[pos] = i;
      rec(pos + 1, i);
    }
  };
  rec(0, 0);
  return out;
}

bool JetSpace::is_jet(Symbol s) const {
  if (s.kind() != SymbolKind::Jet || !(s.dependent() == u_)) return false;
  for (Symbol b : s.jet_index())
    if (std::find(bases_.begin(), bases_.end(), b) == bases_.end()) return false;
  return true;
}

Expr total_derivative(const Expr& e, Symbol direction, const JetSpace& jet) {
  std::vector<Expr> terms{diff(e, direction)};
  for (int id : e.free_ids()) {
    Symbol s = Symbol::from_id(id);
    if (!jet.is_jet(s)) continue;
    Expr de = diff(e, s);
    if (de.is_zero()) continue;
    terms.push_back(Expr(jet.derive(s, direction)) * de);
  }
  return add(std::move(terms));
}

VectorField VectorField::zero(const JetSpace& jet) {
  return VectorField{std::vector<Expr>(jet.bases().size(), Expr(0)), Expr(0)};
}

Expr VectorField::operator()(const Expr& f, const JetSpace& jet) const {
  std::vector<Expr> terms;
  for (std::size_t a = 0; a < xi.size(); ++a)
    if (!xi[a].is_zero()) terms.push_back(xi[a] * diff(f, jet.bases()[a]));
  if (!eta.is_zero()) terms.push_back(eta * diff(f, jet.u()));
  return add(std::move(terms));
}

VectorField VectorField::map(const std::function<Expr(const Expr&)>& f) const {
  VectorField out;
  for (const auto& c : xi) out.xi.push_back(f(c));
  out.eta = f(eta);
  return out;
}

std::string VectorField::str(const JetSpace& jet) const {
  std::string s;
  auto part = [&](const Expr& c, const std::string& var) {
    if (c.is_zero()) return;
    if (!s.empty()) s += " + ";
    s += "(" + c.str() + ")*d_" + var;
  };
  for (std::size_t a = 0; a < xi.size(); ++a) part(xi[a], jet.bases()[a].name());
  part(eta, jet.u().name());
  return s.empty() ? "0" : s;
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  VectorField out;
  for (std::size_t i = 0; i < a.xi.size(); ++i) out.xi.push_back(a.xi[i] + b.xi[i]);
  out.eta = a.eta + b.eta;
  return out;
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  return a + Expr(-1) * b;
}

VectorField operator*(const Expr& c, const VectorField& a) {
  return a.map([&](const Expr& e) { return c * e; });
}

Expr ProlongedField::apply(const Expr& F, const JetSpace& jet) const {
  std::vector<Expr> terms{field(F, jet)};
  for (int id : F.free_ids()) {
    Symbol s = Symbol::from_id(id);
    if (!jet.is_jet(s) || s.order() == 0) continue;
    auto it = coeff.find(s);
    if (it == coeff.end())
      throw InvalidArgument("prolongation lacks the coefficient of " + s.name());
    Expr d = diff(F, s);
    if (!d.is_zero()) terms.push_back(it->second * d);
  }
  return add(std::move(terms));
}

namespace {

struct Prolonger {
  const VectorField& X;
  const JetSpace& jet;
  std::map<Symbol, Expr> rho;
  std::map<std::pair<Symbol, Symbol>, Expr> dxi;

  const Expr& d_xi(std::size_t c, Symbol dir) {
    Symbol key = jet.bases()[c];
    auto k = std::make_pair(key, dir);
    auto it = dxi.find(k);
    if (it != dxi.end()) return it->second;
    return dxi.emplace(k, total_derivative(X.xi[c], dir, jet)).first->second;
  }

  const Expr& first(Symbol a) {
    auto it = rho.find(a);
    if (it != rho.end()) return it->second;
    std::vector<Expr> terms{total_derivative(X.eta, a, jet)};
    for (std::size_t c = 0; c < jet.bases().size(); ++c) {
      const Expr& d = d_xi(c, a);
      if (!d.is_zero()) terms.push_back(-(Expr(jet.coord({jet.bases()[c]})) * d));
    }
    return rho.emplace(a, add(std::move(terms))).first->second;
  }

  Expr second(Symbol a, Symbol b) {
    std::vector<Expr> terms{total_derivative(first(a), b, jet)};
    for (std::size_t c = 0; c < jet.bases().size(); ++c) {
      const Expr& d = d_xi(c, b);
      if (!d.is_zero()) terms.push_back(-(Expr(jet.coord({a, jet.bases()[c]})) * d));
    }
    return add(std::move(terms));
  }
};

}  // namespace

ProlongedField prolong2_for(const VectorField& X, const JetSpace& jet,
                            const std::vector<Symbol>& needed) {
  if (X.xi.size() != jet.bases().size())
    throw InvalidArgument("vector field does not match the jet space");
  Prolonger p{X, jet, {}, {}};
  ProlongedField out{X, {}};
  for (Symbol s : needed) {
    if (!jet.is_jet(s) || s.order() == 0) continue;
    const auto& ix = s.jet_index();
    if (ix.size() == 1) {
      out.coeff[s] = p.first(ix[0]);
    } else if (ix.size() == 2) {
      out.coeff[s] = p.second(ix[0], ix[1]);
    } else {
      throw OrderOverflow("prolongation is limited to order 2");
    }
  }
  return out;
}

ProlongedField prolong2(const VectorField& X, const JetSpace& jet) {
  std::vector<Symbol> all = jet.coords(1);
  auto two = jet.coords(2);
  all.insert(all.end(), two.begin(), two.end());
  return prolong2_for(X, jet, all);
}

VectorField commutator(const VectorField& X, const VectorField& Y, const JetSpace& jet) {
  VectorField out;
  for (std::size_t a = 0; a < X.xi.size(); ++a)
    out.xi.push_back(X(Y.xi[a], jet) - Y(X.xi[a], jet));
  out.eta = X(Y.eta, jet) - Y(X.eta, jet);
  return out;
}

FlowResult flow(const VectorField& X, const JetSpace& jet, std::span<const double> p, double eps,
                int steps_per_unit, double bound) {
  std::vector<Symbol> vars = jet.bases();
  vars.push_back(jet.u());
  if (p.size() != vars.size()) throw InvalidArgument("flow point has the wrong dimension");
  std::vector<CompiledExpr> f;
  for (const auto& c : X.xi) f.emplace_back(c, vars);
  f.emplace_back(X.eta, vars);

  FlowResult out;
  out.point.assign(p.begin(), p.end());
  if (eps == 0) return out;
  int steps = std::max(32, static_cast<int>(std::ceil(std::fabs(eps) * steps_per_unit)));
  double h = eps / steps;
  std::size_t n = vars.size();
  auto rhs = [&](const std::vector<double>& y) {
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = f[i](y);
    return d;
  };
  auto axpy = [&](const std::vector<double>& y, const std::vector<double>& k, double c) {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = y[i] + c * k[i];
    return r;
  };
  std::vector<double> y = out.point;
  for (int s = 0; s < steps; ++s) {
    try {
      auto k1 = rhs(y);
      auto k2 = rhs(axpy(y, k1, h / 2));
      auto k3 = rhs(axpy(y, k2, h / 2));
      auto k4 = rhs(axpy(y, k3, h));
      double jump = 0;
      for (std::size_t i = 0; i < n; ++i) {
        double d = h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        jump = std::max(jump, std::fabs(d) / std::max(1.0, std::fabs(y[i])));
        y[i] += d;
      }
      if (!(jump <= 0.5)) {
        out.blew_up = true;
        out.diagnostic = "step change too large near eps = " + std::to_string(h * (s + 1));
        return out;
      }
    } catch (const DomainError& e) {
      out.blew_up = true;
      out.diagnostic = e.what();
      return out;
    }
    double norm = 0;
    bool finite = true;
    for (double v : y) {
      finite = finite && std::isfinite(v);
      norm = std::max(norm, std::fabs(v));
    }
    if (!finite || norm > bound) {
      out.blew_up = true;
      out.diagnostic = "trajectory left the bounded region at eps = " + std::to_string(h * (s + 1));
      return out;
    }
    out.point = y;
    out.eps_reached = h * (s + 1);
  }
  return out;
}

}  // namespace gradsym
