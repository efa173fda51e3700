#pragma once

#include "gradsym/jet.hpp"
#include "gradsym/sample.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gradsym {

enum class PdeForm {
  /// u_t = D(u_x) u_xx + Q(u), D written in the symbol u_x.
  Quasilinear,
  /// u_t = div(D(W) grad u) + Q(u) in two space dimensions, W = |grad u|^2.
  Divergence,
  /// u_t = rhs for an arbitrary right side on the jet space.
  General,
};

struct PdeSpec {
  int dim = 1;
  PdeForm form = PdeForm::Quasilinear;
  Expr D;
  Expr Q;
  Expr rhs;

  static PdeSpec quasilinear(Expr D, Expr Q);
  static PdeSpec divergence(Expr D, Expr Q);
  static PdeSpec general(int dim, Expr rhs);
  /// Opaque D and Q.
  static PdeSpec generic(int dim);

  const JetSpace& jet() const { return JetSpace::of_dim(dim); }
  /// Symbol D is written in: u_x (1-D) or W (2-D).
  Symbol slot() const;
  /// Right side with W eliminated.
  Expr right_side() const;
  std::string str() const;
};

/// Gradient-squared symbol used as the argument of D in two dimensions.
Symbol omega_symbol();
/// The opaque function symbols D and Q.
Symbol fn_D();
Symbol fn_Q();

/// u_t - right side.
Expr residual_expr(const PdeSpec& pde);

/// X^(2) applied to the residual, restricted to the equation by u_t -> right side.
Expr invariance_expression(const PdeSpec& pde, const VectorField& X);

struct InvarianceReport {
  bool pass = false;
  ZeroVerdict verdict;
};

InvarianceReport check_invariance(const PdeSpec& pde, const VectorField& X,
                                  const SamplerConfig& cfg = {});

struct DeterminingSystem {
  /// Coefficient of u_xx and the u_xx-free remainder of the invariance condition.
  Expr uxx_coefficient;
  Expr remainder;
  /// The displayed equations, rebuilt from the opaque infinitesimals.
  Expr printed_uxx;
  Expr printed_remainder;
  /// Factor f with extracted = f * printed, when found among {1, -1}.
  std::optional<int> uxx_factor;
  std::optional<int> remainder_factor;
  bool uxx_match = false;
  bool remainder_match = false;
  /// Reading adopted for the doubled plus sign in the displayed remainder.
  std::string remainder_reading;
};

/// Invariance condition of u_t = D(u_x)u_xx + Q(u) under
/// xi0(t) d_t + xi1(t,x,u) d_x + eta(t,x,u) d_u, split by u_xx.
DeterminingSystem determining_system(const SamplerConfig& cfg = {});

struct CoefficientOdeSolution {
  std::string branch;
  /// D as a function of u_x with the free constant C; an opaque D(u_x) when
  /// D is arbitrary.
  Expr D;
  bool arbitrary = false;
  std::string note;
};

/// General solution of (e0 + e1 p - e2 p^2) D' + (e3 - 2 e2 p) D = 0, p = u_x.
CoefficientOdeSolution solve_coefficient_ode(const Scalar& e0, const Scalar& e1, const Scalar& e2,
                                             const Scalar& e3);
/// (e0 + e1 u_x - e2 u_x^2) D' + (e3 - 2 e2 u_x) D for a candidate D(u_x).
Expr coefficient_ode_residual(const Expr& D, const Scalar& e0, const Scalar& e1,
                              const Scalar& e2, const Scalar& e3);

/// Continuous equivalence transformation t~ = alpha t + delta0,
/// x~ = beta R x + delta, u~ = gamma u + delta3, with R a rotation given by an
/// exact (cos, sin) pair, plus the discrete reflections.
struct EquivTransform {
  Scalar alpha{1}, beta{1}, gamma{1};
  Scalar delta0{0}, delta1{0}, delta2{0}, delta3{0};
  Scalar cos_rot{1}, sin_rot{0};
  bool reflect_x = false, reflect_t = false, reflect_u = false;

  Scalar eff_alpha() const { return reflect_t ? -alpha : alpha; }
  Scalar eff_beta() const { return reflect_x ? -beta : beta; }
  Scalar eff_gamma() const { return reflect_u ? -gamma : gamma; }
  /// Applies `first`, then this.
  EquivTransform after(const EquivTransform& first) const;
};

/// Equation satisfied by the transformed function: D~(p) = (beta^2/alpha)
/// D(beta p / gamma), Q~(u) = (gamma/alpha) Q((u - delta3)/gamma) in one
/// dimension, with W scaled by (beta/gamma)^2 in two.
PdeSpec apply_equivalence(const PdeSpec& pde, const EquivTransform& g);
/// Residual of the transformed equation written in the original variables,
/// minus (gamma/alpha) times the original residual. Zero for a valid action.
Expr equivalence_pullback(const PdeSpec& source, const PdeSpec& target, const EquivTransform& g);

enum class FormMap {
  /// u -> u - q t removing a constant source (1-D and 2-D).
  ConstantSource,
  /// tau = exp(e2 k t)/(e2 k), w = exp(-e2 t) u in one dimension.
  Exponential1d,
  /// tau = exp(2 e2 k t)/(2 e2 k), w = exp(-e2 t) u in two dimensions.
  Exponential2d,
};

/// tau(t), x unchanged, w = a(t) u + b(t).
struct ChangeOfVariables {
  Expr tau;
  Expr a;
  Expr b;
  /// Old time as a function of the new one (written in the symbol t).
  Expr t_of_tau;
  /// Sign of the new time variable over the old time range.
  int tau_sign = 1;
};

struct FormPreservingResult {
  PdeSpec target;
  ChangeOfVariables map;
  /// Target residual pulled back, times tau'/a, minus the source residual.
  Expr pullback;
  /// Derivatives of D~ and Q~ with respect to t; zero when the map preserves form.
  Expr d_dt_D;
  Expr d_dt_Q;
};

/// Parameters: q for ConstantSource; k and e2 for the exponential maps.
FormPreservingResult apply_form_preserving(const PdeSpec& pde, FormMap map, const Scalar& q,
                                           const Scalar& k, const Scalar& e2);

/// Generator written in the new variables (new time and dependent variable
/// reuse the symbols t and u).
VectorField push_forward(const VectorField& X, const ChangeOfVariables& m, const JetSpace& jet);

}  // namespace gradsym
