#include "gradsym/numerics.hpp"

#include <cmath>

namespace gradsym {

PmModel pm_model(const std::string& name) {
  if (name == "exponential" || name == "exp") return PmModel::Exponential;
  if (name == "rational") return PmModel::Rational;
  if (name == "linear") return PmModel::Linear;
  throw InvalidArgument("unknown diffusivity model '" + name + "' (exponential, rational, linear)");
}

Expr pm_diffusivity(PmModel m, const Scalar& D0) {
  if (m == PmModel::Linear) return Expr(1);
  if (!(D0 > Scalar(0))) throw InvalidArgument("D0 must be positive");
  Expr s = Expr(omega_symbol()) / Expr(D0);
  if (m == PmModel::Exponential) return exp(-s);
  return pow(1 + s, Expr(-1));
}

GridField perona_malik_filter(const GridField& image, PmModel model, const Scalar& D0, double T, double safety,
                              FilterStats* stats) {
  if (image.dim != 2) throw InvalidArgument("image must be 2-D");
  for (double v : image.values)
    if (!std::isfinite(v)) throw InvalidArgument("image values must be finite");
  if (!(T >= 0)) throw InvalidArgument("time must be non-negative");
  GridField g = image;
  g.bc = Boundary::NeumannZeroFlux;
  g.t = 0;
  auto pde = PdeSpec::divergence(pm_diffusivity(model, D0), Expr(0));
  SolveOptions opts;
  opts.safety = safety;
  SolveStats ss;
  GridField out = solve_pde_2d(pde, g, T, opts, &ss);
  if (stats) {
    stats->mass_before = g.mass();
    stats->mass_after = out.mass();
    stats->relative_mass_change =
        std::fabs(stats->mass_after - stats->mass_before) / std::max(std::fabs(stats->mass_before), 1e-300);
    stats->min_before = g.min();
    stats->max_before = g.max();
    stats->min_after = out.min();
    stats->max_after = out.max();
    stats->max_principle = stats->min_after >= stats->min_before && stats->max_after <= stats->max_before;
    stats->steps = ss.steps;
  }
  return out;
}

}  // namespace gradsym
