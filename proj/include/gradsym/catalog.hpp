#pragma once

#include "gradsym/pde.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gradsym {

using Assignment = std::map<std::string, Scalar>;

struct NamedField {
  std::string name;
  VectorField field;
  /// False for operators that must be rejected.
  bool admitted = true;
};

/// Adds `add` to one coefficient of one generator: slot i >= 0 is xi[i], -1 is eta.
struct Perturbation {
  std::size_t generator = 0;
  int slot = -1;
  Expr add = Expr(1);
};

struct SymmetryCase {
  std::string table;
  std::string row;
  /// Optional label when the row is encoded under several readings.
  std::string reading;
  /// False for a reading kept only for the record; the row verdict ignores it.
  bool adopted = true;
  PdeSpec pde;
  /// Sample values per parameter; assignments are the filtered product.
  std::map<std::string, std::vector<Scalar>> params;
  /// "expr != value" or "expr = value", evaluated exactly per assignment.
  std::vector<std::string> constraints;
  std::vector<NamedField> generators;
  std::size_t principal_size = 0;
  /// The generator list already contains the principal algebra.
  bool includes_principal = false;
  std::size_t expected_dim = 0;
  std::optional<Perturbation> negative = Perturbation{};
  std::string note;

  std::string id() const;
  std::vector<Assignment> assignments() const;
  bool satisfies(const Assignment& a) const;
};

PdeSpec instantiate(const PdeSpec& p, const Assignment& a);
VectorField instantiate(const VectorField& X, const Assignment& a);
Expr instantiate(const Expr& e, const Assignment& a);

/// Table ids: T1, T2, T3, principal-1d, principal-2d, principal-noQ, theorem9, corollary.
std::vector<std::string> table_ids();
std::vector<SymmetryCase> cases(const std::string& table);
/// Principal algebra operators of a class (1-D, 2-D, or 2-D with Q = 0).
std::vector<NamedField> principal_algebra(const std::string& which);

struct SampleResult {
  Assignment params;
  std::vector<std::string> generator_names;
  std::vector<double> residuals;
  std::vector<bool> passed;
  std::vector<bool> exact;
  std::vector<std::optional<Witness>> witnesses;
  double negative_residual = 0;
  bool negative_failed = true;
  bool pass = false;
};

struct VerificationReport {
  std::string case_id;
  std::string reading;
  std::uint64_t seed = 0;
  std::vector<SampleResult> samples;
  bool dimension_ok = false;
  bool pass = false;
  double max_residual = 0;
  double min_negative_residual = 0;
  std::string first_failure;
};

/// Residual floor a negative control must exceed.
inline constexpr double kNegativeFloor = 1e-3;

VerificationReport verify_case(const SymmetryCase& c, const SamplerConfig& cfg = {},
                               std::optional<std::vector<Assignment>> samples = std::nullopt);

struct Theorem1Sample {
  Expr w;
  bool solves_linear = false;
  bool invariant = false;
  double residual = 0;
};

struct Theorem1Report {
  Expr Q;
  std::vector<Theorem1Sample> samples;
  bool pass = false;
};

/// w must solve w_t = w_uu - Q(u) w_u; each accepted w gives X = w(t,u) d_x
/// on u_t = u_x^-2 u_xx + Q(u).
Theorem1Report verify_theorem1(const Expr& Q, const std::vector<Expr>& ws,
                               const SamplerConfig& cfg = {});
/// Residual of w_t = w_uu - Q w_u.
Expr theorem1_linear_residual(const Expr& Q, const Expr& w);

struct Bracket {
  std::string a, b;
  /// Coefficients of [a, b] on the basis, keyed by generator name.
  std::map<std::string, Scalar> coefficients;
  bool in_span = false;
  double residual = 0;
};

struct AlgebraReport {
  std::vector<std::string> basis;
  std::vector<Bracket> brackets;
  bool closed = false;
};

/// Pairwise commutators of the basis, expanded on the basis by least squares
/// and confirmed with is_zero.
AlgebraReport verify_algebra_structure(const std::vector<NamedField>& basis, const JetSpace& jet,
                                       const SamplerConfig& cfg = {});
AlgebraReport verify_algebra_structure(const SymmetryCase& c, const Assignment& a,
                                       const SamplerConfig& cfg = {});

/// Catalog encoding as JSON text and back.
std::string cases_to_json(const std::vector<SymmetryCase>& cs);
std::vector<SymmetryCase> cases_from_json(const std::string& text);

}  // namespace gradsym
