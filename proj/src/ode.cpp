#include "gradsym/numerics.hpp"

#include <boost/numeric/odeint/stepper/runge_kutta_cash_karp54.hpp>

#include <algorithm>
#include <cmath>

namespace gradsym {

Trajectory integrate_ode(const OdeRhs& f, std::vector<double> y0, double s0, double s1, double tol) {
  using State = std::vector<double>;
  if (!(tol > 0)) throw InvalidArgument("tolerance must be positive");
  Trajectory tr;
  tr.s.push_back(s0);
  tr.y.push_back(y0);
  if (s0 == s1) {
    tr.complete = true;
    return tr;
  }
  const double dir = s1 > s0 ? 1.0 : -1.0;
  boost::numeric::odeint::runge_kutta_cash_karp54<State> stepper;
  auto sys = [&](const State& y, State& dy, double s) {
    dy.resize(y.size());
    f(s, std::span<const double>(y), std::span<double>(dy));
  };

  State y = std::move(y0), out(y.size()), err(y.size());
  double s = s0;
  double h = dir * std::min(std::fabs(s1 - s0) / 16, std::pow(tol, 0.2));
  const double hmin = 1e-14 * std::max(1.0, std::max(std::fabs(s0), std::fabs(s1)));
  while (dir * (s1 - s) > 0) {
    if (dir * (s + h - s1) > 0) h = s1 - s;
    bool finite = true;
    try {
      stepper.do_step(sys, y, s, out, h, err);
    } catch (const DomainError&) {
      finite = false;
    }
    double e = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (!std::isfinite(out[i]) || !std::isfinite(err[i])) finite = false;
      e = std::max(e, std::fabs(err[i]));
    }
    if (finite && e <= tol) {
      s = (dir * (s1 - (s + h)) <= 0) ? s1 : s + h;
      y = out;
      tr.s.push_back(s);
      tr.y.push_back(y);
      tr.err.push_back(e);
      double grow = e == 0 ? 5.0 : std::clamp(0.9 * std::pow(tol / e, 0.2), 0.2, 5.0);
      h *= grow;
    } else {
      double shrink = finite ? std::clamp(0.9 * std::pow(tol / e, 0.25), 0.1, 0.5) : 0.25;
      h *= shrink;
    }
    if (std::fabs(h) < hmin) {
      tr.diagnostic = "step size underflow near s = " + std::to_string(s);
      return tr;
    }
  }
  tr.complete = true;
  return tr;
}

}  // namespace gradsym
