#pragma once

#include "gradsym/expr.hpp"

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace gradsym {

/// Base variables (t, x or t, x1, x2, ...), one dependent variable and its
/// jet coordinates up to a fixed order.
class JetSpace {
public:
  JetSpace(std::string dependent, std::vector<std::string> bases, int max_order);

  /// u over (t, x), order 2.
  static const JetSpace& one();
  /// u over (t, x1, x2), order 2.
  static const JetSpace& two();
  static const JetSpace& of_dim(int n);

  int dim() const { return static_cast<int>(bases_.size()) - 1; }
  int max_order() const { return max_order_; }
  Symbol t() const { return bases_[0]; }
  Symbol x(int i) const { return bases_.at(static_cast<std::size_t>(i) + 1); }
  Symbol u() const { return u_; }
  const std::vector<Symbol>& bases() const { return bases_; }

  /// Jet coordinate for a multi-index given as base variables (order-free).
  Symbol coord(const std::vector<Symbol>& index) const;
  /// One more derivative of a jet coordinate; throws OrderOverflow past max_order.
  Symbol derive(Symbol jet, Symbol base) const;
  /// All jet coordinates of exactly this order (mixed ones once).
  std::vector<Symbol> coords(int order) const;
  bool is_jet(Symbol s) const;

private:
  std::vector<Symbol> bases_;
  Symbol u_;
  int max_order_;
};

/// D_direction e on jet space.
Expr total_derivative(const Expr& e, Symbol direction, const JetSpace& jet);

/// xi[0] multiplies the time derivative, xi[i] the i-th space derivative.
struct VectorField {
  std::vector<Expr> xi;
  Expr eta;

  static VectorField zero(const JetSpace& jet);
  /// Applies the field as a derivation to an expression in base variables and u.
  Expr operator()(const Expr& f, const JetSpace& jet) const;
  VectorField map(const std::function<Expr(const Expr&)>& f) const;
  std::string str(const JetSpace& jet) const;
};

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(const Expr& c, const VectorField& a);

struct ProlongedField {
  VectorField field;
  /// Coefficient of d/du_J for every jet coordinate of order 1 and 2.
  std::map<Symbol, Expr> coeff;

  /// X^(2) applied to an expression on the second-order jet space.
  Expr apply(const Expr& F, const JetSpace& jet) const;
};

/// Second prolongation by rho_a = D_a eta - u_b D_a xi^b and
/// sigma_ab = D_b rho_a - u_ac D_b xi^c.
ProlongedField prolong2(const VectorField& X, const JetSpace& jet);

/// Coefficients of the prolongation restricted to the jet coordinates in
/// `needed`; cheaper than prolong2 when only a few are used.
ProlongedField prolong2_for(const VectorField& X, const JetSpace& jet,
                            const std::vector<Symbol>& needed);

VectorField commutator(const VectorField& X, const VectorField& Y, const JetSpace& jet);

struct FlowResult {
  std::vector<double> point;
  bool blew_up = false;
  double eps_reached = 0;
  std::string diagnostic;
};

/// Integrates d(t, x, u)/d eps = (xi, eta) with classical RK4 using
/// steps_per_unit substeps per unit of |eps| (at least 32 steps). Blow-up is
/// reported when the state leaves the bound or a single step changes it by more
/// than half its size.
FlowResult flow(const VectorField& X, const JetSpace& jet, std::span<const double> p, double eps,
                int steps_per_unit = 64, double bound = 1e12);

}  // namespace gradsym
