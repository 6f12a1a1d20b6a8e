#pragma once

#include <stdexcept>
#include <string>

namespace nodal {

enum class Errc {
  invalid_curve,
  invalid_polarization,
  invalid_sheaf,
  dimension_mismatch,
  non_ample_multidegree,
  canonical_undefined,
  unsupported,
  empty_subcurve,
  unknown_vertex,
  identity_violation,
  parse_error,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace nodal
