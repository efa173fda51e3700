#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace gradsym {

// Exact rational of arbitrary precision.
class Scalar {
public:
  Scalar() = default;
  Scalar(long v) : q_(v) {}
  Scalar(int v) : q_(v) {}
  Scalar(long num, long den);
  explicit Scalar(const mpq_class& q) : q_(q) { q_.canonicalize(); }

  /// Parses "p", "p/q" or a terminating decimal like "0.25".
  static Scalar parse(const std::string& text);
  /// Nearest rational with denominator <= max_den (continued fractions).
  static Scalar approximate(double x, long max_den = 1000000);

  const mpq_class& value() const { return q_; }
  double to_double() const { return q_.get_d(); }
  long double to_long_double() const;

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_one() const { return q_ == 1; }
  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }
  /// Integer value if it fits in a long.
  std::optional<long> to_long() const;

  Scalar operator-() const { return Scalar(mpq_class(-q_)); }
  Scalar& operator+=(const Scalar& o) { q_ += o.q_; return *this; }
  Scalar& operator-=(const Scalar& o) { q_ -= o.q_; return *this; }
  Scalar& operator*=(const Scalar& o) { q_ *= o.q_; return *this; }
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Scalar& a, const Scalar& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// Integer power; throws DomainError for 0^negative.
  Scalar pow(long n) const;
  /// Exact rational power if the result is rational (perfect roots, real odd
  /// roots of negatives); nullopt otherwise.
  std::optional<Scalar> pow_exact(const Scalar& e) const;
  Scalar abs() const { return Scalar(mpq_class(::abs(q_))); }

  std::string str() const;
  std::size_t hash() const;

private:
  mpq_class q_;
};

}  // namespace gradsym
