#pragma once

#include "gradsym/error.hpp"
#include "gradsym/scalar.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gradsym {

enum class SymbolKind : std::uint8_t { Base, Jet, Parameter, Function };

/// Interned symbol. Names are unique across the process: interning an existing
/// name with a different kind throws.
class Symbol {
public:
  Symbol() = default;

  static Symbol intern(std::string_view name, SymbolKind kind);
  static std::optional<Symbol> lookup(std::string_view name);
  static Symbol from_id(int id) { return Symbol(id); }

  /// Registers the jet coordinates of order <= max_order for `dependent` over
  /// the given base variables. Coordinates are named dependent + "_" + the
  /// base names in the order given (u_tx, u_x1x2, ...).
  static void register_jet_space(std::string_view dependent,
                                 const std::vector<std::string>& bases, int max_order);
  /// Jet coordinate of `dependent` differentiated once more along `base`;
  /// nullopt if it was never registered (order too high).
  static std::optional<Symbol> jet_child(Symbol jet, Symbol base);

  int id() const { return id_; }
  bool valid() const { return id_ >= 0; }
  const std::string& name() const;
  SymbolKind kind() const;
  /// Total derivative order for jet coordinates (0 for the dependent variable).
  int order() const;
  /// Base variables this jet coordinate is differentiated by.
  const std::vector<Symbol>& jet_index() const;
  /// Dependent variable of a jet coordinate.
  Symbol dependent() const;

  friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
  friend bool operator<(Symbol a, Symbol b) { return a.id_ < b.id_; }

private:
  explicit Symbol(int id) : id_(id) {}
  int id_ = -1;
};

enum class Op : std::uint8_t { Num, Sym, Add, Mul, Pow, Fn, Apply, Integral };
enum class Builtin : std::uint8_t { Exp, Log, Sin, Cos };

struct Node;

/// Immutable expression. Every constructor returns the canonical form, so
/// structurally equal expressions compare equal.
class Expr {
public:
  Expr();
  Expr(int v);
  Expr(long v);
  Expr(const Scalar& v);
  Expr(Symbol s);

  Op op() const;
  const Scalar& num() const;
  /// Sym: the symbol. Apply: the function symbol. Integral: the bound variable.
  Symbol sym() const;
  Builtin builtin() const;
  std::span<const Expr> args() const;
  /// Apply: partial-derivative multi-index, one entry per argument.
  const std::vector<int>& deriv() const;

  std::size_t hash() const;
  /// Sorted ids of the free non-function symbols.
  const std::vector<int>& free_ids() const;
  bool depends_on(Symbol s) const;
  std::vector<Symbol> free_symbols() const;
  bool has_apply() const;

  bool is_number() const { return op() == Op::Num; }
  bool is_zero() const { return is_number() && num().is_zero(); }
  bool is_one() const { return is_number() && num().is_one(); }

  /// Parseable text.
  std::string str() const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

  const Node* node() const { return n_.get(); }
  explicit Expr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

private:
  std::shared_ptr<const Node> n_;
};

/// Total order used for canonical sorting.
int compare(const Expr& a, const Expr& b);

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

Expr add(std::vector<Expr> terms);
Expr mul(std::vector<Expr> factors);
Expr pow(const Expr& base, const Expr& exponent);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr sqrt(const Expr& a);
Expr apply(Symbol f, std::vector<Expr> args, std::vector<int> deriv = {});
/// Definite integral of `integrand` over `var` from lo to hi.
Expr integral(const Expr& integrand, Symbol var, const Expr& lo, const Expr& hi);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

using Bindings = std::map<Symbol, Expr>;

/// Rebuilds the tree through the canonical constructors.
Expr normalize(const Expr& e);
/// Distributes products over sums and expands positive integer powers of sums.
Expr expand(const Expr& e);
/// Partial derivative. Opaque applications get their multi-index bumped.
Expr diff(const Expr& e, Symbol s);
/// Simultaneous substitution.
Expr substitute(const Expr& e, const Bindings& bindings);
/// Replaces every application f[idx](args) by d^idx body / d params evaluated
/// at args.
Expr substitute_function(const Expr& e, Symbol f, const std::vector<Symbol>& params,
                         const Expr& body);
/// Coefficients of e as a polynomial in s (after expansion). Throws
/// InvalidArgument if s occurs non-polynomially.
std::map<long, Expr> collect(const Expr& e, Symbol s);

struct ParseOptions {
  /// Names accepted as opaque functions in addition to the defaults
  /// (D, Q, xi0, xi1, xi2, eta, w, phi, V).
  std::vector<std::string> functions;
};

/// Grammar: identifiers [A-Za-z][A-Za-z0-9_]*, numbers (integers or decimals;
/// p/q is ordinary division and stays exact), + - * / ^, parentheses, calls
/// f(a, b). Built-ins: exp, log, sin, cos, sqrt, integral(f, var, lo, hi).
/// Opaque derivatives are written f[i,j](a, b).
Expr parse(std::string_view text, const ParseOptions& opts = {});

}  // namespace gradsym
