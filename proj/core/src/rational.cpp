#include "bwc/rational.hpp"

#include <cctype>
#include <climits>
#include <ostream>
#include <stdexcept>

namespace bwc {

namespace {

mpz_class from_ll(long long n) {
  if constexpr (sizeof(long) >= sizeof(long long)) {
    return mpz_class(static_cast<long>(n));
  } else {
    return mpz_class(std::to_string(n));
  }
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational::Rational(long long n) : v_(from_ll(n)) {}

Rational::Rational(long long num, long long den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  v_ = mpq_class(from_ll(num), from_ll(den));
  v_.canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

std::optional<Rational> Rational::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool neg = false;
  if (text.front() == '-' || text.front() == '+') {
    neg = text.front() == '-';
    text.remove_prefix(1);
  }
  auto slash = text.find('/');
  std::string_view n = text.substr(0, slash);
  std::string_view d = slash == std::string_view::npos ? std::string_view("1")
                                                       : text.substr(slash + 1);
  if (!all_digits(n) || !all_digits(d)) return std::nullopt;
  mpz_class zn{std::string(n)}, zd{std::string(d)};
  if (zd == 0) return std::nullopt;
  if (neg) zn = -zn;
  return Rational(zn, zd);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.v_ == 0) throw std::domain_error("rational division by zero");
  v_ /= o.v_;
  return *this;
}

std::string Rational::str() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

mpz_class Rational::floor() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return q;
}

mpz_class Rational::ceil() const {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return q;
}

std::size_t Rational::hash() const {
  std::size_t h = mpz_get_ui(v_.get_num_mpz_t());
  h ^= static_cast<std::size_t>(mpz_sgn(v_.get_num_mpz_t())) * 0x9e3779b97f4a7c15ULL;
  h = h * 1099511628211ULL ^ mpz_get_ui(v_.get_den_mpz_t());
  return h;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

const Rational& Extended::value() const {
  if (kind_ != Kind::Finite) throw std::logic_error("value() of an infinite quantity");
  return v_;
}

std::string Extended::str() const {
  switch (kind_) {
    case Kind::PosInf: return "inf";
    case Kind::NegInf: return "-inf";
    default: return v_.str();
  }
}

std::optional<Extended> Extended::parse(std::string_view text) {
  if (text == "inf" || text == "+inf") return pos_inf();
  if (text == "-inf") return neg_inf();
  auto r = Rational::parse(text);
  if (!r) return std::nullopt;
  return Extended(*r);
}

std::strong_ordering operator<=>(const Extended& a, const Extended& b) {
  if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
  if (a.kind_ != Extended::Kind::Finite) return std::strong_ordering::equal;
  return a.v_ <=> b.v_;
}

std::ostream& operator<<(std::ostream& os, const Extended& e) { return os << e.str(); }

}  // namespace bwc
