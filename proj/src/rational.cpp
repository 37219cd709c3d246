#include "decisive/rational.hpp"

#include <cctype>
#include <functional>

#include "decisive/error.hpp"

namespace decisive {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::ResourceExhausted: return "ResourceExhausted";
    case ErrorCode::MalformedState: return "MalformedState";
    case ErrorCode::Io: return "Io";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::LimitExceeded: return "LimitExceeded";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    fail(ErrorCode::InvalidArgument, "not a rational number: '" + std::string(whole) + "'");
  }
  Integer value(std::string(s), 10);
  return negative ? Integer(-value) : value;
}

}  // namespace

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) fail(ErrorCode::InvalidArgument, "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) fail(ErrorCode::InvalidArgument, "empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash), text);
    std::string_view den_text = text.substr(slash + 1);
    if (!all_digits(den_text)) {
      fail(ErrorCode::InvalidArgument, "not a rational number: '" + std::string(text) + "'");
    }
    return make_rational(num, Integer(std::string(den_text), 10));
  }

  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    bool negative = !int_part.empty() && int_part.front() == '-';
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) int_part.remove_prefix(1);
    if ((!int_part.empty() && !all_digits(int_part)) || !all_digits(frac_part)) {
      fail(ErrorCode::InvalidArgument, "not a rational number: '" + std::string(text) + "'");
    }
    Integer whole = int_part.empty() ? Integer(0) : Integer(std::string(int_part), 10);
    Integer frac(std::string(frac_part), 10);
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac_part.size());
    Integer num = whole * scale + frac;
    if (negative) num = -num;
    return make_rational(num, scale);
  }

  return Rational(parse_integer(text, text));
}

std::string to_fraction(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_decimal(const Rational& q, int digits) {
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  Integer scaled_num = q.get_num() * scale;
  Integer scaled;
  mpz_tdiv_q(scaled.get_mpz_t(), scaled_num.get_mpz_t(), q.get_den().get_mpz_t());

  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string text = scaled.get_str();
  if (digits > 0) {
    if (text.size() <= static_cast<std::size_t>(digits)) {
      text.insert(0, static_cast<std::size_t>(digits) + 1 - text.size(), '0');
    }
    text.insert(text.size() - static_cast<std::size_t>(digits), ".");
  }
  if (negative && q < 0) text.insert(0, "-");
  return text;
}

Rational pow(const Rational& base, unsigned long exponent) {
  Rational result(1);
  Rational factor = base;
  while (exponent > 0) {
    if (exponent & 1UL) result *= factor;
    exponent >>= 1;
    if (exponent > 0) factor *= factor;
  }
  return result;
}

std::size_t hash_value(const Rational& q) {
  // Low limbs of numerator and denominator are enough for bucketing.
  std::size_t h = std::hash<long>{}(mpz_get_si(q.get_num_mpz_t()));
  h ^= std::hash<unsigned long>{}(mpz_get_ui(q.get_den_mpz_t())) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace decisive
