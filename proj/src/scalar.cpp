#include "gradsym/scalar.hpp"

#include "gradsym/error.hpp"

#include <cmath>
#include <functional>

namespace gradsym {

Scalar::Scalar(long num, long den) {
  if (den == 0) throw DomainError("zero denominator in rational literal");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Scalar Scalar::parse(const std::string& text) {
  auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    mpz_class num(digits.empty() ? "0" : digits, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, text.size() - dot - 1);
    return Scalar(mpq_class(num, den));
  }
  mpq_class q(text, 10);
  if (q.get_den() == 0) throw DomainError("zero denominator in rational literal");
  return Scalar(q);
}

Scalar Scalar::approximate(double x, long max_den) {
  // Best rational approximation by continued fractions.
  long sign = x < 0 ? -1 : 1;
  double v = std::fabs(x);
  mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double frac = v;
  for (int i = 0; i < 64; ++i) {
    double a = std::floor(frac);
    mpz_class ai(a);
    mpz_class h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    double rem = frac - a;
    if (rem < 1e-15) break;
    frac = 1.0 / rem;
    if (std::fabs(mpq_class(h1, k1).get_d() - v) <= 1e-15 * std::max(1.0, v)) break;
  }
  if (k1 == 0) return Scalar(0);
  return Scalar(mpq_class(sign * h1, k1));
}

long double Scalar::to_long_double() const {
  // Two-part conversion keeps about 30 significant digits.
  long double hi = q_.get_d();
  mpq_class rem = q_ - mpq_class(static_cast<double>(hi));
  return hi + static_cast<long double>(rem.get_d());
}

std::optional<long> Scalar::to_long() const {
  if (!is_integer() || !q_.get_num().fits_slong_p()) return std::nullopt;
  return q_.get_num().get_si();
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.is_zero()) throw DomainError("division by zero");
  q_ /= o.q_;
  return *this;
}

Scalar Scalar::pow(long n) const {
  if (n == 0) return Scalar(1);
  if (is_zero()) {
    if (n < 0) throw DomainError("zero raised to a negative power");
    return Scalar(0);
  }
  unsigned long m = static_cast<unsigned long>(n < 0 ? -n : n);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), q_.get_num_mpz_t(), m);
  mpz_pow_ui(den.get_mpz_t(), q_.get_den_mpz_t(), m);
  mpq_class r(num, den);
  r.canonicalize();
  if (n < 0) r = 1 / r;
  return Scalar(r);
}

namespace {
std::optional<mpz_class> exact_root(const mpz_class& v, unsigned long q) {
  mpz_class r;
  if (mpz_root(r.get_mpz_t(), v.get_mpz_t(), q) == 0) return std::nullopt;
  return r;
}
}  // namespace

std::optional<Scalar> Scalar::pow_exact(const Scalar& e) const {
  if (e.is_integer()) {
    auto n = e.to_long();
    if (!n || (*n > 4096 || *n < -4096)) return std::nullopt;
    return pow(*n);
  }
  if (is_zero()) {
    if (e.sign() < 0) throw DomainError("zero raised to a negative power");
    return Scalar(0);
  }
  const mpz_class& p = e.value().get_num();
  const mpz_class& qd = e.value().get_den();
  if (!qd.fits_ulong_p() || qd > 64) return std::nullopt;
  unsigned long q = qd.get_ui();
  bool negative = sign() < 0;
  if (negative && q % 2 == 0) return std::nullopt;
  mpz_class an = ::abs(q_.get_num());
  auto rn = exact_root(an, q);
  auto rd = exact_root(q_.get_den(), q);
  if (!rn || !rd) return std::nullopt;
  mpq_class root(negative ? mpz_class(-*rn) : *rn, *rd);
  root.canonicalize();
  if (!p.fits_slong_p()) return std::nullopt;
  return Scalar(root).pow(p.get_si());
}

std::string Scalar::str() const { return q_.get_str(10); }

std::size_t Scalar::hash() const {
  std::size_t h = static_cast<std::size_t>(mpz_getlimbn(q_.get_num_mpz_t(), 0));
  h ^= static_cast<std::size_t>(mpz_getlimbn(q_.get_den_mpz_t(), 0)) * 0x9e3779b97f4a7c15ULL;
  return h ^ static_cast<std::size_t>(sgn(q_) + 2);
}

}  // namespace gradsym
