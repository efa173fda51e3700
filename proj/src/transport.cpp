#include "gradsym/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace gradsym {

TransportResult transport_solution(const SpaceTimeFn& u, const VectorField& X, double eps, const PdeSpec& pde,
                                   const SamplerConfig& cfg) {
  const auto& J = pde.jet();
  auto inv = check_invariance(pde, X, cfg);
  if (!inv.pass)
    throw InvalidArgument("field " + X.str(J) + " is not admitted by " + pde.str() + " (residual " +
                          std::to_string(inv.verdict.max_residual) + ")");
  bool base_only = true;
  for (const auto& c : X.xi)
    for (Symbol s : c.free_symbols())
      if (s == J.u()) base_only = false;
  auto field = std::make_shared<VectorField>(X);
  auto base = std::make_shared<VectorField>(X);
  base->eta = Expr(0);
  const int d = pde.dim;

  auto run = [&J](const VectorField& F, std::span<const double> p, double e) {
    auto r = flow(F, J, p, e);
    if (r.blew_up) throw DomainError("flow blew up: " + r.diagnostic);
    return r.point;
  };
  auto on_graph = [u, d](const std::vector<double>& q) {
    return u(q[0], std::span<const double>(q.data() + 1, static_cast<std::size_t>(d)));
  };

  TransportResult out;
  out.invariance_residual = inv.verdict.max_residual;
  out.u = [=](double t, std::span<const double> x) -> double {
    std::vector<double> p{t};
    p.insert(p.end(), x.begin(), x.end());
    p.push_back(0.0);
    auto forward = [&](std::vector<double> q) {
      q.back() = on_graph(q);
      return run(*field, q, eps).back();
    };
    if (base_only) return forward(run(*base, p, -eps));
    // exp(-eps X)(t, x, v) must land on the graph of u.
    double v = forward(run(*base, p, -eps));
    for (int it = 0; it < 100; ++it) {
      p.back() = v;
      double next = forward(run(*field, p, -eps));
      if (std::fabs(next - v) <= 1e-13 * std::max(1.0, std::fabs(v))) return next;
      v = next;
    }
    throw DomainError("transport fixed point did not converge");
  };
  return out;
}

}  // namespace gradsym
