#include "gradsym/expr.hpp"

#include <algorithm>
#include <cctype>

namespace gradsym {

namespace {

const std::vector<std::string>& default_functions() {
  static const std::vector<std::string> names{"D", "Q", "xi0", "xi1", "xi2", "eta",
                                              "w", "phi", "V"};
  return names;
}

class Parser {
public:
  Parser(std::string_view text, const ParseOptions& opts) : s_(text), opts_(opts) {}

  Expr run() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expr() {
    Expr acc = term();
    for (;;) {
      if (eat('+')) {
        acc = acc + term();
      } else if (eat('-')) {
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }

  Expr term() {
    Expr acc = unary();
    for (;;) {
      if (eat('*')) {
        acc = acc * unary();
      } else if (eat('/')) {
        std::size_t at = pos_;
        Expr d = unary();
        if (d.is_zero()) throw ParseError("division by zero", at);
        acc = acc / d;
      } else {
        return acc;
      }
    }
  }

  Expr unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  Expr power() {
    Expr b = atom();
    if (eat('^')) {
      std::size_t at = pos_;
      Expr e = unary();
      try {
        return pow(b, e);
      } catch (const DomainError& err) {
        throw ParseError(err.what(), at);
      }
    }
    return b;
  }

  std::string ident() {
    skip();
    std::size_t start = pos_;
    if (pos_ >= s_.size() || !std::isalpha(static_cast<unsigned char>(s_[pos_])))
      fail("expected identifier");
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  Expr number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      std::size_t frac = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (frac == pos_) throw ParseError("malformed number", start);
    }
    return Expr(Scalar::parse(std::string(s_.substr(start, pos_ - start))));
  }

  std::vector<Expr> call_args() {
    std::vector<Expr> args;
    if (eat(')')) return args;
    do {
      args.push_back(expr());
    } while (eat(','));
    expect(')');
    return args;
  }

  bool is_opaque(const std::string& name) const {
    const auto& d = default_functions();
    if (std::find(d.begin(), d.end(), name) != d.end()) return true;
    return std::find(opts_.functions.begin(), opts_.functions.end(), name) !=
           opts_.functions.end();
  }

  Symbol intern(const std::string& name, SymbolKind kind, std::size_t at) {
    try {
      return Symbol::intern(name, kind);
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what(), at);
    }
  }

  Expr builtin(const std::string& name, std::size_t at) {
    if (name == "integral") {
      Expr f = expr();
      expect(',');
      std::size_t vat = pos_;
      std::string var = ident();
      auto existing = Symbol::lookup(var);
      Symbol v = existing ? *existing : intern(var, SymbolKind::Parameter, vat);
      if (v.kind() == SymbolKind::Function) throw ParseError("'" + var + "' is a function", vat);
      expect(',');
      Expr lo = expr();
      expect(',');
      Expr hi = expr();
      expect(')');
      return integral(f, v, lo, hi);
    }
    auto args = call_args();
    if (args.size() != 1) throw ParseError(name + " takes one argument", at);
    const Expr& a = args[0];
    if (name == "exp") return exp(a);
    if (name == "log") return log(a);
    if (name == "sin") return sin(a);
    if (name == "cos") return cos(a);
    return sqrt(a);
  }

  Expr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (eat('(')) {
      Expr e = expr();
      expect(')');
      return e;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) fail("unexpected '" + std::string(1, c) + "'");
    std::size_t at = pos_;
    std::string name = ident();
    skip();
    bool has_index = pos_ < s_.size() && s_[pos_] == '[';
    bool has_call = pos_ < s_.size() && s_[pos_] == '(';
    static const std::vector<std::string> builtins{"exp", "log", "sin", "cos", "sqrt", "integral"};
    bool is_builtin = std::find(builtins.begin(), builtins.end(), name) != builtins.end();
    if (is_builtin) {
      if (!has_call) throw ParseError("built-in '" + name + "' needs arguments", at);
      ++pos_;
      return builtin(name, at);
    }
    if (has_index || has_call) {
      if (!is_opaque(name)) throw ParseError("unknown function name '" + name + "'", at);
      Symbol f = intern(name, SymbolKind::Function, at);
      std::vector<int> deriv;
      if (eat('[')) {
        do {
          skip();
          std::size_t nat = pos_;
          Expr n = number();
          if (!n.num().is_integer() || n.num().sign() < 0)
            throw ParseError("derivative index must be a nonnegative integer", nat);
          deriv.push_back(static_cast<int>(*n.num().to_long()));
        } while (eat(','));
        expect(']');
      }
      expect('(');
      auto args = call_args();
      if (!deriv.empty() && deriv.size() != args.size())
        throw ParseError("derivative index length differs from argument count", at);
      return apply(f, std::move(args), std::move(deriv));
    }
    auto existing = Symbol::lookup(name);
    if (existing) {
      if (existing->kind() == SymbolKind::Function)
        throw ParseError("function '" + name + "' used without arguments", at);
      return Expr(*existing);
    }
    if (is_opaque(name)) throw ParseError("function '" + name + "' used without arguments", at);
    return Expr(intern(name, SymbolKind::Parameter, at));
  }

  std::string_view s_;
  const ParseOptions& opts_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, const ParseOptions& opts) { return Parser(text, opts).run(); }

}  // namespace gradsym
