#pragma once

#include "gradsym/numerics.hpp"
#include "gradsym/pde.hpp"

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gradsym {

/// Radial form U_t = (1/r)(r U_r^(2k+1))_r of u_t = div(W^k grad u), written as
/// a 1-D equation whose space variable x plays r.
struct RadialPde {
  Scalar k;
  /// +1 for the U_r > 0 branch, -1 for U_r < 0.
  int sign = 1;
  PdeSpec pde;
  /// Residual of the 2-D equation under u = U(t, sqrt(x1^2 + x2^2)) minus the
  /// radial residual; identically zero.
  Expr witness;
};

RadialPde radial_reduce(const Scalar& k, int sign = 1);

/// Opaque U(t, r) used by the radial witness.
Symbol fn_U();

/// The four-dimensional symmetry algebra X0, X1, D0, D1 of the radial equation.
std::vector<std::pair<std::string, VectorField>> radial_algebra(const Scalar& k);

/// Symbols of the reduced ODEs: similarity variable and phi, phi', phi''.
Symbol sym_omega();
Symbol sym_phi(int order);

/// U = A + B phi(omega) with A, B and omega written in t and x (x plays r).
struct Ansatz {
  Expr A;
  Expr B;
  Expr omega;
  std::string text;
};

struct ReductionCase {
  /// One of i, ii, iii, iii-l0, iv.
  std::string id;
  std::string generators;
  Scalar k, lambda;
  /// Exponent of t in omega = r t^(-gamma) for case iv.
  Scalar gamma;
  Ansatz ansatz;
  /// Radial residual after substituting the ansatz, in t, x, phi0..phi2.
  Expr substituted;
  /// Multiplier turning `substituted` into `ode`.
  Expr clearing_factor;
  /// Machine-derived ODE (= 0) in omega and phi0..phi2, normalized so that the
  /// highest derivative has coefficient 2k+1 (second order) or 1 (first order).
  Expr ode;
  int order = 2;
  /// Highest derivative solved for: phi^(order) = rhs(omega, phi0, ..).
  Expr rhs;
  /// Printed equation for this case, as written.
  Expr printed;
  std::string printed_label;
  /// Agreement after dividing each equation by its leading coefficient.
  bool matches_printed = false;
  /// Agreement without any normalization.
  bool matches_printed_verbatim = false;
  std::string note;
};

/// Case ids accepted by reduce_to_ode.
std::vector<std::string> reduction_ids();
ReductionCase reduce_to_ode(const std::string& id, const Scalar& k, const Scalar& lambda = Scalar(0));
/// Printed equation for a case, in omega and phi0..phi2.
Expr printed_ode(const std::string& id, const Scalar& k, const Scalar& lambda);
/// U(t, r) of the ansatz with phi replaced by a callable profile.
double ansatz_value(const ReductionCase& c, const std::function<double(double)>& phi, double t, double r);

/// The identity (omega phi'^(1+2k))' = ((k+1)/lam) omega phi - (k/lam) omega^2 phi'
/// on solutions of the case-iii equation: returns
/// omega phi'^(2k) * ode - [(omega phi'^(1+2k))' - right side].
Expr first_integral_identity(const Scalar& k, const Scalar& lambda);

struct ExactSolution {
  /// 4-15, 4-16, 4-17, 4-11.
  std::string family;
  Scalar k, lambda, C1, C2;
  int sign = 1;
  /// For 4-17: "derived" (exp(-4t/(3 lam))) or "printed" (exp(-2t/(3 lam))).
  std::string variant;
  /// Profile phi(omega), or phi(t) for 4-11. Throws DomainError off the domain.
  std::function<double(double)> phi;
  /// u(t, r); throws DomainError off the domain.
  std::function<double(double, double)> u;
  /// Closed form of phi when one exists.
  std::optional<Expr> phi_expr;
  /// Closed form of u in t and x (x plays r) when one exists.
  std::optional<Expr> u_expr;
  std::string note;

  /// u(t, x1, x2) = u(t, |x|) or u(t, x) in one dimension.
  double operator()(double t, std::span<const double> x) const;
};

struct ExactParams {
  /// Defaults per family: -2 for 4-15, -1/3 for 4-16/4-17, 1 for 4-11.
  std::optional<Scalar> k;
  Scalar lambda{1};
  Scalar C1{0};
  Scalar C2{0};
  int sign = 1;
  std::string variant = "derived";
  /// Initial value for 4-11.
  Scalar phi0{1, 10};
  /// Lower limit of the 4-15 quadrature.
  double omega_ref = 1;
  /// Mesh on which the 4-15 quadrature is cached.
  double mesh_lo = 0.25, mesh_hi = 8;
  int mesh_n = 64;
};

/// Quadrature family phi = int_{omega_ref}^omega y ds + C2,
/// y = ((-k s^2 + C1 s^(-2k/(2k+1))) / (2(k+1)(3k+1)))^(1/(2k)).
ExactSolution bernoulli_closed_form(const Scalar& k, const Scalar& C1, const ExactParams& p = {});
/// z = y^(2k) from the closed form, in omega.
Expr bernoulli_z(const Scalar& k, const Scalar& C1);
/// The derived case-ii equation with lam = 0, multiplied by 2k phi'^(2k-1)/(2k+1) and
/// rewritten for z = phi'^(2k): z' + (2k/(2k+1)) z/omega + (k/((k+1)(2k+1))) omega.
Expr bernoulli_linear_residual(const Scalar& k, const Expr& z);

std::vector<std::string> exact_families();
ExactSolution exact_solution(const std::string& family, const ExactParams& p = {});

/// The x <-> u interchange links u_t = u_x^-2 u_xx + Q(u) and
/// w_t = w_uu - Q(u) w_u.
struct Hodograph1d {
  Expr Q;
  PdeSpec source;
  /// Linear equation with x playing u and u playing w.
  PdeSpec linear;
};

Hodograph1d hodograph_1d(const Expr& Q);
/// Residual of the source equation after u(t, x) is defined implicitly by
/// x = w(t, u): the jet is replaced by u_t = -w_t/w_u, u_x = 1/w_u,
/// u_xx = -w_uu/w_u^3 and x by w. Written in t and u.
Expr hodograph_pullback(const Hodograph1d& h, const Expr& w);
/// u(t, x) with w(t, u(t, x)) = x, by bracketed root finding on [u_lo, u_hi].
std::function<double(double, double)> invert_closed_form(const Expr& w, double u_lo, double u_hi);
/// u(t, x) from samples of w(t, .) on a u-grid, by monotone cubic
/// interpolation of the swapped pairs. Throws InvalidArgument when the samples
/// are not strictly increasing.
std::function<double(double, double)> invert_grid(std::function<std::vector<double>(double)> w_samples,
                                                  std::vector<double> u_grid);

/// Closed-form solution w of w_t = w_uu - Q w_u, strictly increasing in u on
/// [u_lo, u_hi] for t in [t0, t1].
struct Theorem1Example {
  Expr Q;
  Expr w;
  double u_lo = 0, u_hi = 1;
  double t0 = 0.1, t1 = 0.5;
};

/// Three examples each for Q = 0 and Q = u.
std::vector<Theorem1Example> theorem1_examples();

struct InversionCheck {
  double x_lo = 0, x_hi = 0;
  ResidualReport fd;
};

/// Inverts x = w(t, u) by root finding and runs pde_residual_fd on
/// u_t = u_x^-2 u_xx + Q over an x window covered for every t.
InversionCheck theorem1_inversion_check(const Theorem1Example& e, int n = 17, int refine = 1);

/// r = sqrt(V), U = z carries V_t = -V_zz to the radial equation with k = -1.
struct RadialHodograph {
  RadialPde radial;
  /// V_t = -V_zz with x playing z and u playing V.
  PdeSpec linear;
};

RadialHodograph radial_hodograph();
/// Radial residual (k = -1) after U(t, r) is defined by r^2 = V(t, U); written
/// in t and z (the symbol x).
Expr radial_hodograph_pullback(const Expr& V);
/// U(t, r) solving V(t, U) = r^2 on [z_lo, z_hi]; DomainError if V <= 0 or
/// r^2 is not attained.
std::function<double(double, double)> radial_hodograph_solution(std::function<double(double, double)> V,
                                                                double z_lo, double z_hi);

}  // namespace gradsym
