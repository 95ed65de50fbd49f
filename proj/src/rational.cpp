#include "lipgap/rational.hpp"

#include <cctype>
#include <ostream>
#include <vector>

#include "lipgap/errors.hpp"

namespace lipgap {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Guard: return "guard";
    case ErrorKind::HorizonExhausted: return "horizon-exhausted";
    case ErrorKind::DepthInsufficient: return "depth-insufficient";
    case ErrorKind::TableIncomplete: return "table-incomplete";
    case ErrorKind::ChainMismatch: return "chain-mismatch";
    case ErrorKind::UnknownSheet: return "unknown-sheet";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

Rational::Rational(long long num, long long den) {
  if (den == 0) fail(ErrorKind::Precondition, "zero denominator");
  value_ = mpq_class(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
  value_.canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) fail(ErrorKind::Precondition, "zero denominator");
  value_ = mpq_class(num, den);
  value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) fail(ErrorKind::Precondition, "division by zero");
  value_ /= o.value_;
  return *this;
}

namespace {

bool all_digits(std::string_view s, bool allow_sign) {
  if (s.empty()) return false;
  std::size_t i = 0;
  if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  auto slash = text.find('/');
  std::string_view ns = text.substr(0, slash);
  std::string_view ds = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!all_digits(ns, true) || !all_digits(ds, false))
    fail(ErrorKind::Parse, "not a rational: '" + std::string(text) + "'");
  std::string nstr(ns);
  if (nstr[0] == '+') nstr.erase(0, 1);
  mpz_class n(nstr, 10), d(std::string(ds), 10);
  if (d == 0) fail(ErrorKind::Parse, "zero denominator in '" + std::string(text) + "'");
  return Rational(n, d);
}

std::string Rational::str() const {
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::decimal(int significant) const {
  mpf_class f(0, 512);
  f = value_;
  std::vector<char> buf(64 + significant);
  gmp_snprintf(buf.data(), buf.size(), "%.*Fg", significant, f.get_mpf_t());
  return std::string(buf.data());
}

Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }

mpz_class floor(const Rational& x) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), x.value().get_num_mpz_t(), x.value().get_den_mpz_t());
  return q;
}

mpz_class ceil(const Rational& x) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), x.value().get_num_mpz_t(), x.value().get_den_mpz_t());
  return q;
}

Rational pow2(int exponent) {
  mpz_class p = 1;
  unsigned e = static_cast<unsigned>(exponent < 0 ? -exponent : exponent);
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), e);
  return exponent >= 0 ? Rational(p) : Rational(mpz_class(1), p);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

std::size_t RationalHash::operator()(const Rational& r) const {
  return std::hash<std::string>{}(r.str());
}

}  // namespace lipgap
