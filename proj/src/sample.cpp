#include "gradsym/sample.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

namespace gradsym {

namespace {

struct NotExact {};

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Scalar draw(std::mt19937_64& rng, const Range& r, long grid) {
  std::uniform_int_distribution<long> dist(0, grid);
  return r.first + (r.second - r.first) * Scalar(dist(rng), grid);
}

// Opaque function values, one independent draw per (function, derivative
// index, argument values) at a given point.
struct OpaqueSource {
  std::uint64_t point_seed = 0;
  const SamplerConfig* cfg = nullptr;

  Scalar value(const std::string& key) const {
    if (!cfg) throw InvalidArgument("opaque function without a sampler: " + key);
    std::mt19937_64 rng(splitmix(point_seed ^ fnv(key)));
    return draw(rng, cfg->opaque_range, cfg->grid);
  }
};

std::string apply_key(const Expr& e, const std::vector<std::string>& args) {
  std::string k = e.sym().name() + "[";
  for (int d : e.deriv()) k += std::to_string(d) + ",";
  k += "](";
  for (const auto& a : args) k += a + ",";
  return k + ")";
}

// ---------------------------------------------------------------------------
// Exact path

struct ExactEval {
  const std::map<int, Scalar>& vals;
  const OpaqueSource& src;

  Scalar run(const Expr& e) const {
    switch (e.op()) {
      case Op::Num:
        return e.num();
      case Op::Sym: {
        auto it = vals.find(e.sym().id());
        if (it == vals.end()) throw InvalidArgument("unbound symbol " + e.sym().name());
        return it->second;
      }
      case Op::Add: {
        Scalar s(0);
        for (const auto& a : e.args()) s += run(a);
        return s;
      }
      case Op::Mul: {
        Scalar p(1);
        for (const auto& a : e.args()) {
          p *= run(a);
          if (p.is_zero()) {
            // Remaining factors must still be inside their domain.
            for (const auto& b : e.args()) run(b);
            return p;
          }
        }
        return p;
      }
      case Op::Pow: {
        Scalar b = run(e.args()[0]);
        Scalar x = run(e.args()[1]);
        auto r = b.pow_exact(x);
        if (!r) throw NotExact{};
        return *r;
      }
      case Op::Fn: {
        Scalar a = run(e.args()[0]);
        switch (e.builtin()) {
          case Builtin::Exp:
            if (a.is_zero()) return Scalar(1);
            break;
          case Builtin::Log:
            if (a.sign() <= 0) throw DomainError("log of a non-positive number");
            if (a.is_one()) return Scalar(0);
            break;
          case Builtin::Sin:
            if (a.is_zero()) return Scalar(0);
            break;
          case Builtin::Cos:
            if (a.is_zero()) return Scalar(1);
            break;
        }
        throw NotExact{};
      }
      case Op::Apply: {
        std::vector<std::string> keys;
        for (const auto& a : e.args()) keys.push_back(run(a).str());
        return src.value(apply_key(e, keys));
      }
      case Op::Integral:
        throw NotExact{};
    }
    throw NotExact{};
  }
};

// ---------------------------------------------------------------------------
// Float path

struct FV {
  long double v;
  long double mag;
};

using Env = std::vector<long double>;

long double checked(long double v) {
  if (!std::isfinite(v)) throw DomainError("non-finite intermediate value");
  return v;
}

long double real_pow(long double b, const Expr& xe, long double x) {
  if (b == 0) {
    if (x < 0) throw DomainError("zero raised to a negative power");
    return x == 0 ? 1.0L : 0.0L;
  }
  if (b > 0) return std::pow(b, x);
  if (xe.is_number()) {
    const mpq_class& q = xe.num().value();
    if (q.get_den() == 1) return std::pow(b, x);
    if (mpz_odd_p(q.get_den_mpz_t())) {
      long double m = std::pow(-b, x);
      return mpz_odd_p(q.get_num_mpz_t()) ? -m : m;
    }
  } else if (x == std::floor(x) && std::fabs(x) < 1e6) {
    return std::pow(b, x);
  }
  throw DomainError("negative number raised to a non-integer power");
}

struct FloatEval {
  const OpaqueSource* src;

  FV run(const Expr& e, Env& env) const {
    switch (e.op()) {
      case Op::Num: {
        long double v = e.num().to_long_double();
        return {v, std::fabs(v)};
      }
      case Op::Sym: {
        int id = e.sym().id();
        if (id >= static_cast<int>(env.size()) || std::isnan(env[id]))
          throw InvalidArgument("unbound symbol " + e.sym().name());
        return {env[id], std::fabs(env[id])};
      }
      case Op::Add: {
        long double s = 0, m = 0;
        for (const auto& a : e.args()) {
          FV x = run(a, env);
          s += x.v;
          m += x.mag;
        }
        return {checked(s), m};
      }
      case Op::Mul: {
        long double p = 1, m = 1;
        for (const auto& a : e.args()) {
          FV x = run(a, env);
          p *= x.v;
          m *= x.mag;
        }
        return {checked(p), checked(m)};
      }
      case Op::Pow: {
        FV b = run(e.args()[0], env);
        FV x = run(e.args()[1], env);
        long double v = checked(real_pow(b.v, e.args()[1], x.v));
        long double m = std::fabs(v);
        if (x.v > 0 && b.mag > 0) m = std::max(m, std::pow(b.mag, x.v));
        return {v, checked(m)};
      }
      case Op::Fn: {
        FV a = run(e.args()[0], env);
        switch (e.builtin()) {
          case Builtin::Exp: {
            long double v = checked(std::exp(a.v));
            return {v, v * std::max(1.0L, a.mag)};
          }
          case Builtin::Log: {
            if (a.v <= 0) throw DomainError("log of a non-positive number");
            long double v = std::log(a.v);
            return {v, std::max(std::fabs(v), a.mag / a.v)};
          }
          case Builtin::Sin: {
            long double v = std::sin(a.v);
            return {v, std::max(std::fabs(v), a.mag)};
          }
          case Builtin::Cos: {
            long double v = std::cos(a.v);
            return {v, std::max(std::fabs(v), a.mag)};
          }
        }
        break;
      }
      case Op::Apply: {
        if (!src) throw InvalidArgument("cannot evaluate opaque function " + e.sym().name());
        std::vector<std::string> keys;
        for (const auto& a : e.args()) {
          long double v = run(a, env).v;
          char buf[64];
          std::snprintf(buf, sizeof buf, "%.12Le", v == 0 ? 0.0L : v);
          keys.emplace_back(buf);
        }
        long double v = src->value(apply_key(e, keys)).to_long_double();
        return {v, std::fabs(v)};
      }
      case Op::Integral: {
        long double lo = run(e.args()[1], env).v;
        long double hi = run(e.args()[2], env).v;
        int id = e.sym().id();
        Env inner = env;
        if (id >= static_cast<int>(inner.size()))
          inner.resize(id + 1, std::numeric_limits<long double>::quiet_NaN());
        const Expr& f = e.args()[0];
        auto g = [&](double s) {
          inner[id] = s;
          return static_cast<double>(run(f, inner).v);
        };
        double err = 0;
        double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            g, static_cast<double>(lo), static_cast<double>(hi), 15, 1e-13, &err);
        return {checked(v), std::fabs(v) + err};
      }
    }
    return {0, 0};
  }
};

int env_size_for(const Expr& e) {
  int m = 0;
  for (int id : e.free_ids()) m = std::max(m, id + 1);
  return m;
}

Env make_env(int size) { return Env(size, std::numeric_limits<long double>::quiet_NaN()); }

// Integral nodes hide their bound variable from free_ids; make room for it.
int max_symbol_id(const Expr& e) {
  int m = -1;
  if (e.op() == Op::Sym || e.op() == Op::Integral) m = e.sym().id();
  for (int id : e.free_ids()) m = std::max(m, id);
  for (const auto& a : e.args())
    if (a.op() != Op::Num && a.op() != Op::Sym) m = std::max(m, max_symbol_id(a));
  return m;
}

}  // namespace

ZeroVerdict is_zero(const Expr& e, const SamplerConfig& cfg) {
  ZeroVerdict out;
  if (e.is_zero()) {
    out.points = cfg.samples;
    return out;
  }
  std::vector<Symbol> syms = e.free_symbols();
  std::mt19937_64 master(cfg.seed);
  int env_size = std::max(env_size_for(e), max_symbol_id(e) + 1);
  for (int i = 0; i < cfg.samples; ++i) {
    bool done = false;
    for (int attempt = 0; attempt < cfg.max_attempts && !done; ++attempt) {
      std::map<int, Scalar> vals;
      for (Symbol s : syms) {
        auto it = cfg.ranges.find(s);
        vals.emplace(s.id(), draw(master, it == cfg.ranges.end() ? cfg.default_range : it->second,
                                  cfg.grid));
      }
      OpaqueSource src{master(), &cfg};
      double residual = 0, abs_residual = 0;
      bool exact = true;
      try {
        try {
          Scalar v = ExactEval{vals, src}.run(e);
          residual = std::fabs(v.to_double());
          if (!v.is_zero() && residual == 0) residual = std::numeric_limits<double>::min();
          abs_residual = residual;
        } catch (const NotExact&) {
          exact = false;
          Env env = make_env(env_size);
          for (const auto& [id, v] : vals) env[id] = v.to_long_double();
          FV r = FloatEval{&src}.run(e, env);
          residual = static_cast<double>(std::fabs(r.v) / std::max(1.0L, r.mag));
          abs_residual = static_cast<double>(std::fabs(r.v));
        }
      } catch (const DomainError&) {
        ++out.resampled;
        continue;
      }
      done = true;
      ++out.points;
      out.exact = out.exact && exact;
      bool fails = exact ? residual != 0 : !(residual <= cfg.tol);
      if (fails) out.zero = false;
      if (fails && (!out.witness || residual > out.witness->residual)) {
        Witness w;
        for (Symbol s : syms) w.point[s.name()] = vals.at(s.id()).to_double();
        w.residual = residual;
        w.abs_residual = abs_residual;
        out.witness = w;
      }
      out.max_residual = std::max(out.max_residual, residual);
      out.max_abs_residual = std::max(out.max_abs_residual, abs_residual);
    }
    if (!done)
      throw DomainError("no admissible sample point found for " + e.str().substr(0, 120));
  }
  return out;
}

std::optional<Scalar> eval_exact(const Expr& e, const std::map<Symbol, Scalar>& point) {
  std::map<int, Scalar> vals;
  for (const auto& [s, v] : point) vals.emplace(s.id(), v);
  OpaqueSource src;
  try {
    return ExactEval{vals, src}.run(e);
  } catch (const NotExact&) {
    return std::nullopt;
  }
}

long double eval_float(const Expr& e, const std::map<Symbol, long double>& point) {
  int size = max_symbol_id(e) + 1;
  for (const auto& [s, v] : point) size = std::max(size, s.id() + 1);
  Env env = make_env(size);
  for (const auto& [s, v] : point) env[s.id()] = v;
  return FloatEval{nullptr}.run(e, env).v;
}

CompiledExpr::CompiledExpr(Expr e, std::vector<Symbol> vars)
    : e_(std::move(e)), vars_(std::move(vars)) {
  env_size_ = max_symbol_id(e_) + 1;
  for (Symbol s : vars_) env_size_ = std::max(env_size_, s.id() + 1);
}

double CompiledExpr::operator()(std::span<const double> values) const {
  if (values.size() != vars_.size()) throw InvalidArgument("wrong number of values");
  Env env = make_env(env_size_);
  for (std::size_t i = 0; i < vars_.size(); ++i) env[vars_[i].id()] = values[i];
  return static_cast<double>(FloatEval{nullptr}.run(e_, env).v);
}

}  // namespace gradsym
