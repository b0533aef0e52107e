#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace bwc {

// Exact rational number; always stored in lowest terms with a positive
// denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long long n);                 // NOLINT
  Rational(long n) : Rational(static_cast<long long>(n)) {}  // NOLINT
  Rational(int n) : v_(n) {}             // NOLINT
  Rational(long long num, long long den);
  Rational(const mpz_class& num, const mpz_class& den);
  explicit Rational(const mpz_class& n) : v_(n) {}
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  // Accepts "p", "-p", "p/q". Returns nullopt on malformed input or q == 0.
  static std::optional<Rational> parse(std::string_view text);

  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }
  const mpq_class& raw() const { return v_; }

  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }
  double to_double() const { return v_.get_d(); }
  std::string str() const;

  mpz_class floor() const;
  mpz_class ceil() const;
  Rational abs() const { return Rational(mpq_class(::abs(v_))); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  std::size_t hash() const;

 private:
  mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

// A rational extended with +inf and -inf. Used where a value may be
// unbounded (unreachable targets, cycles in a shortest-path product).
class Extended {
 public:
  enum class Kind : std::uint8_t { NegInf, Finite, PosInf };

  Extended() = default;
  Extended(Rational v) : kind_(Kind::Finite), v_(std::move(v)) {}  // NOLINT
  static Extended pos_inf() { Extended e; e.kind_ = Kind::PosInf; return e; }
  static Extended neg_inf() { Extended e; e.kind_ = Kind::NegInf; return e; }

  Kind kind() const { return kind_; }
  bool finite() const { return kind_ == Kind::Finite; }
  const Rational& value() const;
  std::string str() const;
  static std::optional<Extended> parse(std::string_view text);

  friend bool operator==(const Extended& a, const Extended& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::Finite || a.v_ == b.v_);
  }
  friend std::strong_ordering operator<=>(const Extended& a, const Extended& b);

 private:
  Kind kind_ = Kind::Finite;
  Rational v_;
};

std::ostream& operator<<(std::ostream& os, const Extended& e);

}  // namespace bwc

template <>
struct std::hash<bwc::Rational> {
  std::size_t operator()(const bwc::Rational& r) const noexcept { return r.hash(); }
};
