#include "nodal/rational.hpp"

#include "nodal/error.hpp"

#include <cctype>

namespace nodal {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_curve: return "invalid-curve";
    case Errc::invalid_polarization: return "invalid-polarization";
    case Errc::invalid_sheaf: return "invalid-sheaf";
    case Errc::dimension_mismatch: return "dimension-mismatch";
    case Errc::non_ample_multidegree: return "non-ample-multidegree";
    case Errc::canonical_undefined: return "canonical-undefined";
    case Errc::unsupported: return "unsupported";
    case Errc::empty_subcurve: return "empty-subcurve";
    case Errc::unknown_vertex: return "unknown-vertex";
    case Errc::identity_violation: return "identity-violation";
    case Errc::parse_error: return "parse-error";
  }
  return "unknown";
}

namespace {

bool is_integer_text(std::string_view s, bool allow_sign) {
  if (s.empty()) return false;
  std::size_t i = 0;
  if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

BigInt parse_integer(std::string_view s) {
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  return BigInt(std::string(s));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto bad = [&](const char* why) {
    return Error(Errc::parse_error,
                 "malformed rational \"" + std::string(text) + "\": " + why);
  };
  const auto slash = text.find('/');
  const std::string_view num_text = text.substr(0, slash);
  if (!is_integer_text(num_text, true)) throw bad("numerator is not an integer");
  BigInt num = parse_integer(num_text);
  BigInt den = 1;
  if (slash != std::string_view::npos) {
    const std::string_view den_text = text.substr(slash + 1);
    if (!is_integer_text(den_text, false)) {
      throw bad("denominator must be a positive integer");
    }
    den = parse_integer(den_text);
    if (den == 0) throw bad("zero denominator");
  }
  return Rational(num, den);
}

std::string format_rational(const Rational& value) {
  return numerator_of(value).str() + "/" + denominator_of(value).str();
}

}  // namespace nodal
