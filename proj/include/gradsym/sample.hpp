#pragma once

#include "gradsym/expr.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gradsym {

using Range = std::pair<Scalar, Scalar>;

struct SamplerConfig {
  int samples = 100;
  std::uint64_t seed = 20240917;
  double tol = 1e-9;
  Range default_range{Scalar(1, 2), Scalar(2)};
  std::map<Symbol, Range> ranges;
  /// Values of opaque functions and of each of their derivatives.
  Range opaque_range{Scalar(1, 2), Scalar(2)};
  /// Sample values are lo + (hi - lo) * j / grid for a random integer j.
  long grid = 997;
  /// Attempts per point before giving up on domain errors.
  int max_attempts = 64;
};

struct Witness {
  std::map<std::string, double> point;
  /// Relative on the float path, absolute on the exact path.
  double residual = 0;
  double abs_residual = 0;
};

struct ZeroVerdict {
  bool zero = true;
  /// Every point was evaluated in exact rational arithmetic.
  bool exact = true;
  double max_residual = 0;
  double max_abs_residual = 0;
  std::optional<Witness> witness;
  int points = 0;
  int resampled = 0;
};

/// Randomized identity test. Each point is evaluated exactly when the
/// expression is rational there, otherwise in long double with the residual
/// measured relative to the magnitude of the largest contributing term.
ZeroVerdict is_zero(const Expr& e, const SamplerConfig& cfg = {});

/// Exact value at a rational point; nullopt when the value is not rational
/// (irrational power, transcendental function) or an opaque function occurs.
std::optional<Scalar> eval_exact(const Expr& e, const std::map<Symbol, Scalar>& point);

/// Floating-point value. Throws DomainError outside the real domain and
/// InvalidArgument for unbound symbols or opaque applications.
long double eval_float(const Expr& e, const std::map<Symbol, long double>& point);

/// Expression bound to an ordered variable list for repeated numeric evaluation.
class CompiledExpr {
public:
  CompiledExpr() = default;
  CompiledExpr(Expr e, std::vector<Symbol> vars);
  double operator()(std::span<const double> values) const;
  const Expr& expr() const { return e_; }
  const std::vector<Symbol>& vars() const { return vars_; }

private:
  Expr e_;
  std::vector<Symbol> vars_;
  int env_size_ = 0;
};

}  // namespace gradsym
