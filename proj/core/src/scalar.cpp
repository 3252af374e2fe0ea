#include "spectracalc/scalar.hpp"

#include <cctype>
#include <ostream>
#include <sstream>

namespace spectracalc {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::singular: return "singular";
    case ErrorKind::clustering_ambiguous: return "clustering-ambiguous";
    case ErrorKind::chain_construction: return "chain-construction-failure";
    case ErrorKind::reconstruction: return "reconstruction-failure";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::invalid_family: return "invalid-family";
    case ErrorKind::structural_mismatch: return "structural-mismatch";
    case ErrorKind::out_of_radius: return "out-of-radius";
    case ErrorKind::non_convergent: return "non-convergent";
    case ErrorKind::cap_exceeded: return "cap-exceeded";
    case ErrorKind::unsupported_mode: return "unsupported-mode";
    case ErrorKind::parse: return "parse-error";
  }
  return "unknown";
}

namespace {

[[noreturn]] void bad_number(std::string_view text) {
  throw SpectralError(ErrorKind::parse, "not a rational number: '" + std::string(text) + "'");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

mpq_class pow10(long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? mpq_class(mpz_class(1), p) : mpq_class(p);
}

// [+-]digits[.digits][(e|E)[+-]digits]
mpq_class parse_decimal(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) negative = text[pos++] == '-';
  std::string digits;
  long scale = 0;
  bool seen_digit = false;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    digits.push_back(text[pos++]);
    seen_digit = true;
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      digits.push_back(text[pos++]);
      --scale;
      seen_digit = true;
    }
  }
  if (!seen_digit) bad_number(text);
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool exp_negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) exp_negative = text[pos++] == '-';
    long exponent = 0;
    bool exp_digit = false;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      exponent = exponent * 10 + (text[pos++] - '0');
      exp_digit = true;
      if (exponent > 100000) bad_number(text);
    }
    if (!exp_digit) bad_number(text);
    scale += exp_negative ? -exponent : exponent;
  }
  if (pos != text.size()) bad_number(text);
  mpq_class value(mpz_class(digits, 10));
  value *= pow10(scale);
  value.canonicalize();
  return negative ? mpq_class(-value) : value;
}

}  // namespace

mpq_class GaussQ::parse_rational(std::string_view text) {
  text = trim(text);
  if (text.empty()) bad_number(text);
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  mpq_class num = parse_decimal(trim(text.substr(0, slash)));
  mpq_class den = parse_decimal(trim(text.substr(slash + 1)));
  if (sgn(den) == 0) throw SpectralError(ErrorKind::parse, "zero denominator in '" + std::string(text) + "'");
  mpq_class q = num / den;
  q.canonicalize();
  return q;
}

mpq_class GaussQ::from_double(double value) {
  if (!std::isfinite(value)) throw SpectralError(ErrorKind::parse, "non-finite value cannot be made exact");
  mpq_class q(value);
  q.canonicalize();
  return q;
}

GaussQ& GaussQ::operator/=(const GaussQ& o) {
  mpq_class den = o.norm();
  if (sgn(den) == 0) throw SpectralError(ErrorKind::singular, "division by exact zero");
  mpq_class r = (re_ * o.re_ + im_ * o.im_) / den;
  mpq_class i = (im_ * o.re_ - re_ * o.im_) / den;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

std::string GaussQ::to_string() const {
  if (sgn(im_) == 0) return re_.get_str();
  std::ostringstream os;
  os << re_.get_str() << (sgn(im_) < 0 ? "-" : "+") << mpq_class(abs(im_)).get_str() << "i";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const GaussQ& z) { return os << z.to_string(); }

bool lex_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

bool lex_less(const GaussQ& a, const GaussQ& b) {
  if (a.re() != b.re()) return a.re() < b.re();
  return a.im() < b.im();
}

void Tolerance::validate() const {
  for (double v : {rank_eps, recon_eps, cluster_eps}) {
    if (!std::isfinite(v) || v < 0.0) {
      throw SpectralError(ErrorKind::invalid_argument, "tolerances must be finite and nonnegative");
    }
  }
}

}  // namespace spectracalc
