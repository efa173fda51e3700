#include "gradsym/expr.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace gradsym {

struct Node {
  Op op = Op::Num;
  Builtin fn = Builtin::Exp;
  Scalar num;
  Symbol sym;
  std::vector<Expr> args;
  std::vector<int> deriv;
  std::size_t hash = 0;
  std::vector<int> free;
  bool has_apply = false;
};

namespace {

inline std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t scalar_hash(const Scalar& s) {
  const mpq_class& q = s.value();
  std::size_t h = static_cast<std::size_t>(mpz_getlimbn(q.get_num_mpz_t(), 0));
  h = mix(h, static_cast<std::size_t>(mpz_size(q.get_num_mpz_t())));
  h = mix(h, static_cast<std::size_t>(mpz_getlimbn(q.get_den_mpz_t(), 0)));
  h = mix(h, static_cast<std::size_t>(sgn(q) + 2));
  return h;
}

std::vector<int> merge_free(const std::vector<Expr>& args) {
  std::vector<int> out;
  for (const auto& a : args) {
    const auto& f = a.free_ids();
    if (f.empty()) continue;
    std::vector<int> merged;
    merged.reserve(out.size() + f.size());
    std::set_union(out.begin(), out.end(), f.begin(), f.end(), std::back_inserter(merged));
    out.swap(merged);
  }
  return out;
}

Expr make(Node n) {
  std::size_t h = static_cast<std::size_t>(n.op) * 1315423911u;
  switch (n.op) {
    case Op::Num:
      h = mix(h, scalar_hash(n.num));
      break;
    case Op::Sym:
      h = mix(h, std::hash<std::string>{}(n.sym.name()));
      n.free = {n.sym.id()};
      break;
    default:
      break;
  }
  if (n.op == Op::Fn) h = mix(h, static_cast<std::size_t>(n.fn) + 17);
  if (n.op == Op::Apply || n.op == Op::Integral) h = mix(h, std::hash<std::string>{}(n.sym.name()));
  for (int d : n.deriv) h = mix(h, static_cast<std::size_t>(d) + 101);
  for (const auto& a : n.args) h = mix(h, a.hash());
  n.hash = h;
  if (n.op != Op::Num && n.op != Op::Sym) {
    n.free = merge_free(n.args);
    if (n.op == Op::Integral) {
      // The bound variable is not free; endpoints may reference it by name only
      // through their own free sets.
      std::vector<int> outer = merge_free({n.args[1], n.args[2]});
      std::vector<int> inner = n.args[0].free_ids();
      inner.erase(std::remove(inner.begin(), inner.end(), n.sym.id()), inner.end());
      std::vector<int> merged;
      std::set_union(outer.begin(), outer.end(), inner.begin(), inner.end(),
                     std::back_inserter(merged));
      n.free = merged;
    }
  }
  n.has_apply = n.op == Op::Apply;
  for (const auto& a : n.args) n.has_apply = n.has_apply || a.has_apply();
  return Expr(std::make_shared<const Node>(std::move(n)));
}

Expr make_num(const Scalar& s) {
  Node n;
  n.op = Op::Num;
  n.num = s;
  return make(std::move(n));
}

const Expr& zero_expr() {
  static const Expr z = make_num(Scalar(0));
  return z;
}

int rank(Op op) {
  switch (op) {
    case Op::Sym: return 0;
    case Op::Pow: return 1;
    case Op::Mul: return 2;
    case Op::Fn: return 3;
    case Op::Apply: return 4;
    case Op::Add: return 5;
    case Op::Integral: return 6;
    case Op::Num: return 7;
  }
  return 8;
}

int compare_args(std::span<const Expr> a, std::span<const Expr> b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare(a[i], b[i]);
    if (c != 0) return c;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

bool is_integer_num(const Expr& e) { return e.is_number() && e.num().is_integer(); }

// Splits a term into numeric coefficient and the remaining factor product.
std::pair<Scalar, Expr> split_coeff(const Expr& t) {
  if (t.op() == Op::Mul && t.args()[0].is_number()) {
    auto rest = t.args().subspan(1);
    if (rest.size() == 1) return {t.args()[0].num(), rest[0]};
    Node n;
    n.op = Op::Mul;
    n.args.assign(rest.begin(), rest.end());
    return {t.args()[0].num(), make(std::move(n))};
  }
  return {Scalar(1), t};
}

Expr scale(const Scalar& c, const Expr& rest) {
  if (c.is_zero()) return zero_expr();
  if (c.is_one()) return rest;
  if (rest.is_number()) return make_num(c * rest.num());
  Node n;
  n.op = Op::Mul;
  n.args.push_back(make_num(c));
  if (rest.op() == Op::Mul) {
    n.args.insert(n.args.end(), rest.args().begin(), rest.args().end());
  } else {
    n.args.push_back(rest);
  }
  return make(std::move(n));
}

Expr make_fn(Builtin f, const Expr& a) {
  Node n;
  n.op = Op::Fn;
  n.fn = f;
  n.args = {a};
  return make(std::move(n));
}

Expr make_pow(const Expr& b, const Expr& e) {
  Node n;
  n.op = Op::Pow;
  n.args = {b, e};
  return make(std::move(n));
}

bool positive_factor(const Expr& f) {
  return (f.is_number() && f.num().sign() > 0) || (f.op() == Op::Fn && f.builtin() == Builtin::Exp);
}

}  // namespace

// ---------------------------------------------------------------------------
// Accessors

Expr::Expr() : Expr(zero_expr()) {}
Expr::Expr(int v) : Expr(make_num(Scalar(v))) {}
Expr::Expr(long v) : Expr(make_num(Scalar(v))) {}
Expr::Expr(const Scalar& v) : Expr(make_num(v)) {}
Expr::Expr(Symbol s) {
  Node n;
  n.op = Op::Sym;
  n.sym = s;
  *this = make(std::move(n));
}

Op Expr::op() const { return n_->op; }
const Scalar& Expr::num() const { return n_->num; }
Symbol Expr::sym() const { return n_->sym; }
Builtin Expr::builtin() const { return n_->fn; }
std::span<const Expr> Expr::args() const { return n_->args; }
const std::vector<int>& Expr::deriv() const { return n_->deriv; }
std::size_t Expr::hash() const { return n_->hash; }
const std::vector<int>& Expr::free_ids() const { return n_->free; }
bool Expr::has_apply() const { return n_->has_apply; }

bool Expr::depends_on(Symbol s) const {
  return std::binary_search(n_->free.begin(), n_->free.end(), s.id());
}

std::vector<Symbol> Expr::free_symbols() const {
  std::vector<Symbol> out;
  for (int id : n_->free) out.push_back(Symbol::from_id(id));
  return out;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node() == b.node()) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

int compare(const Expr& a, const Expr& b) {
  if (a.node() == b.node()) return 0;
  int ra = rank(a.op()), rb = rank(b.op());
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a.op()) {
    case Op::Num: {
      auto c = a.num() <=> b.num();
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Op::Sym: {
      int c = a.sym().name().compare(b.sym().name());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Op::Fn:
      if (a.builtin() != b.builtin()) return a.builtin() < b.builtin() ? -1 : 1;
      return compare(a.args()[0], b.args()[0]);
    case Op::Apply:
    case Op::Integral: {
      int c = a.sym().name().compare(b.sym().name());
      if (c != 0) return c < 0 ? -1 : 1;
      if (a.deriv() != b.deriv()) return a.deriv() < b.deriv() ? -1 : 1;
      return compare_args(a.args(), b.args());
    }
    default:
      return compare_args(a.args(), b.args());
  }
}

// ---------------------------------------------------------------------------
// Canonical constructors

Expr add(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  flat.reserve(terms.size());
  for (auto& t : terms) {
    if (t.op() == Op::Add) {
      flat.insert(flat.end(), t.args().begin(), t.args().end());
    } else {
      flat.push_back(std::move(t));
    }
  }
  Scalar constant(0);
  std::vector<std::pair<Expr, Scalar>> items;
  items.reserve(flat.size());
  for (const auto& t : flat) {
    if (t.is_number()) {
      constant += t.num();
      continue;
    }
    auto [c, rest] = split_coeff(t);
    items.emplace_back(rest, c);
  }
  std::sort(items.begin(), items.end(),
            [](const auto& x, const auto& y) { return compare(x.first, y.first) < 0; });
  std::vector<Expr> out;
  for (std::size_t i = 0; i < items.size();) {
    Scalar c = items[i].second;
    std::size_t j = i + 1;
    while (j < items.size() && items[j].first == items[i].first) c += items[j++].second;
    if (!c.is_zero()) out.push_back(scale(c, items[i].first));
    i = j;
  }
  if (!constant.is_zero()) out.push_back(make_num(constant));
  if (out.empty()) return zero_expr();
  if (out.size() == 1) return out[0];
  std::sort(out.begin(), out.end(), ExprLess{});
  Node n;
  n.op = Op::Add;
  n.args = std::move(out);
  return make(std::move(n));
}

Expr mul(std::vector<Expr> factors) {
  Scalar coeff(1);
  std::vector<std::pair<Expr, Expr>> items;
  std::vector<Expr> exp_args;
  std::vector<Expr> work = std::move(factors);
  while (!work.empty()) {
    Expr f = std::move(work.back());
    work.pop_back();
    switch (f.op()) {
      case Op::Num:
        if (f.num().is_zero()) return zero_expr();
        coeff *= f.num();
        break;
      case Op::Mul:
        work.insert(work.end(), f.args().begin(), f.args().end());
        break;
      case Op::Fn:
        if (f.builtin() == Builtin::Exp) {
          exp_args.push_back(f.args()[0]);
        } else {
          items.emplace_back(f, Expr(1));
        }
        break;
      case Op::Pow:
        items.emplace_back(f.args()[0], f.args()[1]);
        break;
      default:
        items.emplace_back(f, Expr(1));
        break;
    }
  }
  std::sort(items.begin(), items.end(),
            [](const auto& x, const auto& y) { return compare(x.first, y.first) < 0; });
  std::vector<Expr> out;
  bool reflatten = false;
  for (std::size_t i = 0; i < items.size();) {
    std::vector<Expr> exps{items[i].second};
    std::size_t j = i + 1;
    while (j < items.size() && items[j].first == items[i].first) exps.push_back(items[j++].second);
    Expr e = exps.size() == 1 ? exps[0] : add(std::move(exps));
    Expr p = (e.is_one()) ? items[i].first : pow(items[i].first, e);
    if (p.is_number()) {
      if (p.num().is_zero()) return zero_expr();
      coeff *= p.num();
    } else {
      if (p.op() == Op::Mul || (p.op() == Op::Fn && p.builtin() == Builtin::Exp && exps.size() > 1))
        reflatten = true;
      if (p.op() == Op::Fn && p.builtin() == Builtin::Exp) {
        exp_args.push_back(p.args()[0]);
      } else {
        out.push_back(p);
      }
    }
    i = j;
  }
  if (!exp_args.empty()) {
    Expr a = add(std::move(exp_args));
    Expr ef = exp(a);
    if (ef.is_number()) {
      coeff *= ef.num();
    } else {
      out.push_back(ef);
    }
  }
  if (reflatten) {
    out.push_back(make_num(coeff));
    bool nested = false;
    for (const auto& f : out) nested = nested || f.op() == Op::Mul;
    if (nested) return mul(std::move(out));
    out.pop_back();
  }
  if (coeff.is_zero()) return zero_expr();
  if (out.empty()) return make_num(coeff);
  std::sort(out.begin(), out.end(), ExprLess{});
  if (out.size() == 1 && coeff.is_one()) return out[0];
  Node n;
  n.op = Op::Mul;
  if (!coeff.is_one()) n.args.push_back(make_num(coeff));
  n.args.insert(n.args.end(), out.begin(), out.end());
  return make(std::move(n));
}

Expr pow(const Expr& base, const Expr& exponent) {
  if (exponent.is_zero()) return Expr(1);
  if (exponent.is_one()) return base;
  if (base.is_one()) return Expr(1);
  if (base.op() == Op::Fn && base.builtin() == Builtin::Exp) return exp(exponent * base.args()[0]);
  if (!exponent.is_number()) return make_pow(base, exponent);

  const Scalar& e = exponent.num();
  if (base.is_number()) {
    const Scalar& b = base.num();
    if (b.is_zero()) {
      if (e.sign() < 0) throw DomainError("zero raised to a negative power");
      return Expr(0);
    }
    if (auto r = b.pow_exact(e)) return Expr(*r);
    // Pull out the largest exactly representable part is not attempted;
    // irrational powers stay symbolic.
    return make_pow(base, exponent);
  }
  if (base.op() == Op::Pow && e.is_integer()) {
    return pow(base.args()[0], base.args()[1] * exponent);
  }
  if (base.op() == Op::Mul) {
    if (e.is_integer()) {
      std::vector<Expr> fs;
      for (const auto& f : base.args()) fs.push_back(pow(f, exponent));
      return mul(std::move(fs));
    }
    std::vector<Expr> safe, rest;
    for (const auto& f : base.args()) (positive_factor(f) ? safe : rest).push_back(f);
    if (!safe.empty()) {
      std::vector<Expr> fs;
      for (const auto& f : safe) fs.push_back(pow(f, exponent));
      if (!rest.empty()) fs.push_back(pow(mul(std::move(rest)), exponent));
      return mul(std::move(fs));
    }
  }
  return make_pow(base, exponent);
}

Expr exp(const Expr& a) {
  if (a.is_zero()) return Expr(1);
  if (a.op() == Op::Fn && a.builtin() == Builtin::Log) return a.args()[0];
  return make_fn(Builtin::Exp, a);
}

Expr log(const Expr& a) {
  if (a.is_one()) return Expr(0);
  if (a.op() == Op::Fn && a.builtin() == Builtin::Exp) return a.args()[0];
  return make_fn(Builtin::Log, a);
}

Expr sin(const Expr& a) {
  if (a.is_zero()) return Expr(0);
  return make_fn(Builtin::Sin, a);
}

Expr cos(const Expr& a) {
  if (a.is_zero()) return Expr(1);
  return make_fn(Builtin::Cos, a);
}

Expr sqrt(const Expr& a) { return pow(a, Expr(Scalar(1, 2))); }

Expr apply(Symbol f, std::vector<Expr> args, std::vector<int> deriv) {
  if (deriv.empty()) deriv.assign(args.size(), 0);
  if (deriv.size() != args.size())
    throw InvalidArgument("derivative index of '" + f.name() + "' does not match its arity");
  Node n;
  n.op = Op::Apply;
  n.sym = f;
  n.args = std::move(args);
  n.deriv = std::move(deriv);
  return make(std::move(n));
}

Expr integral(const Expr& integrand, Symbol var, const Expr& lo, const Expr& hi) {
  if (lo == hi) return Expr(0);
  Node n;
  n.op = Op::Integral;
  n.sym = var;
  n.args = {integrand, lo, hi};
  return make(std::move(n));
}

Expr operator+(const Expr& a, const Expr& b) { return add({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return add({a, mul({Expr(-1), b})}); }
Expr operator*(const Expr& a, const Expr& b) { return mul({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return mul({a, pow(b, Expr(-1))}); }
Expr operator-(const Expr& a) { return mul({Expr(-1), a}); }

// ---------------------------------------------------------------------------
// Rendering

namespace {

const char* builtin_name(Builtin f) {
  switch (f) {
    case Builtin::Exp: return "exp";
    case Builtin::Log: return "log";
    case Builtin::Sin: return "sin";
    case Builtin::Cos: return "cos";
  }
  return "?";
}

// Precedence: 1 sum, 2 product, 3 power operand, 4 atom.
void render(const Expr& e, int parent, std::ostream& os);

bool negative_term(const Expr& t) {
  if (t.is_number()) return t.num().sign() < 0;
  return t.op() == Op::Mul && t.args()[0].is_number() && t.args()[0].num().sign() < 0;
}

void render_num(const Scalar& s, int parent, std::ostream& os) {
  bool composite = s.sign() < 0 || !s.is_integer();
  bool paren = composite && parent >= 3;
  if (paren) os << '(';
  os << s.str();
  if (paren) os << ')';
}

void render(const Expr& e, int parent, std::ostream& os) {
  switch (e.op()) {
    case Op::Num:
      render_num(e.num(), parent, os);
      return;
    case Op::Sym:
      os << e.sym().name();
      return;
    case Op::Add: {
      bool paren = parent > 1;
      if (paren) os << '(';
      bool first = true;
      for (const auto& t : e.args()) {
        if (first) {
          render(t, 1, os);
        } else if (negative_term(t)) {
          os << " - ";
          render(-t, 2, os);
        } else {
          os << " + ";
          render(t, 2, os);
        }
        first = false;
      }
      if (paren) os << ')';
      return;
    }
    case Op::Mul: {
      bool paren = parent > 2;
      if (paren) os << '(';
      auto args = e.args();
      std::size_t start = 0;
      if (args[0].is_number()) {
        const Scalar& c = args[0].num();
        if (c == Scalar(-1)) {
          os << '-';
        } else {
          os << c.str() << '*';
        }
        start = 1;
      }
      for (std::size_t i = start; i < args.size(); ++i) {
        if (i > start) os << '*';
        render(args[i], 3, os);
      }
      if (paren) os << ')';
      return;
    }
    case Op::Pow: {
      bool paren = parent > 3;
      if (paren) os << '(';
      render(e.args()[0], 4, os);
      os << '^';
      const Expr& x = e.args()[1];
      if (is_integer_num(x) && x.num().sign() >= 0) {
        os << x.num().str();
      } else {
        os << '(';
        render(x, 0, os);
        os << ')';
      }
      if (paren) os << ')';
      return;
    }
    case Op::Fn:
      os << builtin_name(e.builtin()) << '(';
      render(e.args()[0], 0, os);
      os << ')';
      return;
    case Op::Apply: {
      os << e.sym().name();
      bool any = std::any_of(e.deriv().begin(), e.deriv().end(), [](int d) { return d != 0; });
      if (any) {
        os << '[';
        for (std::size_t i = 0; i < e.deriv().size(); ++i) os << (i ? "," : "") << e.deriv()[i];
        os << ']';
      }
      os << '(';
      for (std::size_t i = 0; i < e.args().size(); ++i) {
        if (i) os << ", ";
        render(e.args()[i], 0, os);
      }
      os << ')';
      return;
    }
    case Op::Integral:
      os << "integral(";
      render(e.args()[0], 0, os);
      os << ", " << e.sym().name() << ", ";
      render(e.args()[1], 0, os);
      os << ", ";
      render(e.args()[2], 0, os);
      os << ')';
      return;
  }
}

}  // namespace

std::string Expr::str() const {
  std::ostringstream os;
  render(*this, 0, os);
  return os.str();
}

// ---------------------------------------------------------------------------
// Transformations

namespace {

Expr rebuild(const Expr& e, const std::vector<Expr>& args) {
  switch (e.op()) {
    case Op::Num:
    case Op::Sym:
      return e;
    case Op::Add:
      return add(args);
    case Op::Mul:
      return mul(args);
    case Op::Pow:
      return pow(args[0], args[1]);
    case Op::Fn:
      switch (e.builtin()) {
        case Builtin::Exp: return exp(args[0]);
        case Builtin::Log: return log(args[0]);
        case Builtin::Sin: return sin(args[0]);
        case Builtin::Cos: return cos(args[0]);
      }
      break;
    case Op::Apply:
      return apply(e.sym(), args, e.deriv());
    case Op::Integral:
      return integral(args[0], e.sym(), args[1], args[2]);
  }
  return e;
}

template <typename F>
Expr map_args(const Expr& e, F&& f) {
  std::vector<Expr> args;
  args.reserve(e.args().size());
  for (const auto& a : e.args()) args.push_back(f(a));
  return rebuild(e, args);
}

}  // namespace

Expr normalize(const Expr& e) {
  if (e.op() == Op::Num || e.op() == Op::Sym) return e;
  return map_args(e, [](const Expr& a) { return normalize(a); });
}

Expr expand(const Expr& e) {
  switch (e.op()) {
    case Op::Num:
    case Op::Sym:
      return e;
    case Op::Add:
      return map_args(e, [](const Expr& a) { return expand(a); });
    case Op::Mul: {
      std::vector<Expr> terms{Expr(1)};
      for (const auto& f : e.args()) {
        Expr x = expand(f);
        std::vector<Expr> next;
        if (x.op() == Op::Add) {
          next.reserve(terms.size() * x.args().size());
          for (const auto& t : terms)
            for (const auto& s : x.args()) next.push_back(t * s);
        } else {
          for (const auto& t : terms) next.push_back(t * x);
        }
        terms.swap(next);
      }
      return add(std::move(terms));
    }
    case Op::Pow: {
      Expr b = expand(e.args()[0]);
      const Expr& x = e.args()[1];
      if (b.op() == Op::Add && is_integer_num(x) && x.num().sign() > 0 && x.num() <= Scalar(16)) {
        long n = *x.num().to_long();
        std::vector<Expr> acc{Expr(1)};
        for (long i = 0; i < n; ++i) {
          std::vector<Expr> next;
          next.reserve(acc.size() * b.args().size());
          for (const auto& t : acc)
            for (const auto& s : b.args()) next.push_back(t * s);
          Expr sum = add(std::move(next));
          acc = sum.op() == Op::Add ? std::vector<Expr>(sum.args().begin(), sum.args().end())
                                    : std::vector<Expr>{sum};
        }
        return add(std::move(acc));
      }
      return pow(b, expand(x));
    }
    default:
      return map_args(e, [](const Expr& a) { return expand(a); });
  }
}

Expr diff(const Expr& e, Symbol s) {
  if (!e.depends_on(s)) return Expr(0);
  switch (e.op()) {
    case Op::Num:
      return Expr(0);
    case Op::Sym:
      return Expr(1);
    case Op::Add: {
      std::vector<Expr> ts;
      for (const auto& a : e.args()) ts.push_back(diff(a, s));
      return add(std::move(ts));
    }
    case Op::Mul: {
      auto args = e.args();
      std::vector<Expr> ts;
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (!args[i].depends_on(s)) continue;
        std::vector<Expr> fs(args.begin(), args.end());
        fs[i] = diff(args[i], s);
        ts.push_back(mul(std::move(fs)));
      }
      return add(std::move(ts));
    }
    case Op::Pow: {
      const Expr& b = e.args()[0];
      const Expr& x = e.args()[1];
      if (!x.depends_on(s)) return mul({x, pow(b, x - Expr(1)), diff(b, s)});
      return e * (diff(x, s) * log(b) + x * diff(b, s) / b);
    }
    case Op::Fn: {
      const Expr& a = e.args()[0];
      Expr da = diff(a, s);
      switch (e.builtin()) {
        case Builtin::Exp: return e * da;
        case Builtin::Log: return da / a;
        case Builtin::Sin: return cos(a) * da;
        case Builtin::Cos: return -(sin(a) * da);
      }
      break;
    }
    case Op::Apply: {
      std::vector<Expr> ts;
      auto args = e.args();
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (!args[i].depends_on(s)) continue;
        std::vector<int> d = e.deriv();
        d[i] += 1;
        ts.push_back(apply(e.sym(), std::vector<Expr>(args.begin(), args.end()), d) *
                     diff(args[i], s));
      }
      return add(std::move(ts));
    }
    case Op::Integral: {
      const Expr& f = e.args()[0];
      if ((f.depends_on(s) && s != e.sym()) || e.args()[1].depends_on(s))
        throw InvalidArgument("differentiation of an integral with a parameter-dependent "
                              "integrand or lower limit is not supported");
      Bindings b{{e.sym(), e.args()[2]}};
      return substitute(f, b) * diff(e.args()[2], s);
    }
  }
  return Expr(0);
}

Expr substitute(const Expr& e, const Bindings& bindings) {
  if (bindings.empty()) return e;
  bool touched = false;
  for (int id : e.free_ids())
    if (bindings.count(Symbol::from_id(id))) {
      touched = true;
      break;
    }
  if (!touched) return e;
  if (e.op() == Op::Sym) return bindings.at(e.sym());
  if (e.op() == Op::Integral) {
    Bindings inner = bindings;
    inner.erase(e.sym());
    return integral(substitute(e.args()[0], inner), e.sym(), substitute(e.args()[1], bindings),
                    substitute(e.args()[2], bindings));
  }
  return map_args(e, [&](const Expr& a) { return substitute(a, bindings); });
}

namespace {

struct FunctionSubst {
  Symbol f;
  const std::vector<Symbol>& params;
  Expr body;
  std::map<std::vector<int>, Expr> cache;

  const Expr& derivative(const std::vector<int>& idx) {
    auto it = cache.find(idx);
    if (it != cache.end()) return it->second;
    Expr d = body;
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (int c = 0; c < idx[i]; ++c) d = diff(d, params[i]);
    return cache.emplace(idx, d).first->second;
  }

  Expr run(const Expr& e) {
    if (!e.has_apply()) return e;
    if (e.op() == Op::Apply && e.sym() == f) {
      if (e.args().size() != params.size())
        throw InvalidArgument("arity mismatch substituting function '" + f.name() + "'");
      Bindings b;
      for (std::size_t i = 0; i < params.size(); ++i) b.emplace(params[i], run(e.args()[i]));
      return substitute(derivative(e.deriv()), b);
    }
    return map_args(e, [&](const Expr& a) { return run(a); });
  }
};

}  // namespace

Expr substitute_function(const Expr& e, Symbol f, const std::vector<Symbol>& params,
                         const Expr& body) {
  FunctionSubst fs{f, params, body, {}};
  return fs.run(e);
}

std::map<long, Expr> collect(const Expr& e, Symbol s) {
  Expr x = expand(e);
  std::vector<Expr> terms;
  if (x.op() == Op::Add) {
    terms.assign(x.args().begin(), x.args().end());
  } else {
    terms.push_back(x);
  }
  std::map<long, std::vector<Expr>> parts;
  auto power_of = [&](const Expr& f) -> std::optional<long> {
    if (f.op() == Op::Sym && f.sym() == s) return 1;
    if (f.op() == Op::Pow && f.args()[0].op() == Op::Sym && f.args()[0].sym() == s &&
        is_integer_num(f.args()[1]))
      return f.args()[1].num().to_long();
    return std::nullopt;
  };
  for (const auto& t : terms) {
    if (!t.depends_on(s)) {
      parts[0].push_back(t);
      continue;
    }
    if (auto p = power_of(t)) {
      parts[*p].push_back(Expr(1));
      continue;
    }
    if (t.op() != Op::Mul) throw InvalidArgument("expression is not polynomial in " + s.name());
    long p = 0;
    std::vector<Expr> rest;
    for (const auto& f : t.args()) {
      if (auto q = power_of(f)) {
        p += *q;
      } else if (f.depends_on(s)) {
        throw InvalidArgument("expression is not polynomial in " + s.name());
      } else {
        rest.push_back(f);
      }
    }
    parts[p].push_back(mul(std::move(rest)));
  }
  std::map<long, Expr> out;
  for (auto& [p, ts] : parts) {
    Expr c = add(std::move(ts));
    if (!c.is_zero()) out.emplace(p, c);
  }
  return out;
}

}  // namespace gradsym
