#pragma once

#include "nodal/curve.hpp"
#include "nodal/rational.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace nodal {

/// Rational weights w_i, one per component, with 0 < w_i < 1 and sum 1.
/// A single-component curve carries the unique weight vector (1).
class Polarization {
 public:
  /// Throws Error{Errc::invalid_polarization}.
  explicit Polarization(std::vector<Rational> weights);

  std::size_t size() const { return weights_.size(); }
  const std::vector<Rational>& weights() const { return weights_; }
  const Rational& operator[](std::size_t i) const { return weights_[i]; }

  /// wrank(O_B) = sum of w_i over the components of B.
  Rational weight_of(Subcurve b) const;

  bool operator==(const Polarization&) const = default;

 private:
  std::vector<Rational> weights_;
};

/// w_i = d_i / sum d_j. Throws Errc::non_ample_multidegree if some d_i <= 0.
Polarization from_multidegree(const CurveGraph& c,
                              std::span<const std::int64_t> degrees);

/// eta_i = (g_i - 1 + delta_i/2) / (p_a(C) - 1), the polarization induced by
/// the dualizing sheaf. Throws Errc::canonical_undefined unless c is stable.
Polarization canonical_polarization(const CurveGraph& c);

/// lambda_i = Delta_w(O_{C_i}) = 1 - g_i - w_i * chi(O_C). The identity
/// sum lambda_i = delta is checked and violation throws identity_violation.
std::vector<Rational> lambda_vector(const CurveGraph& c, const Polarization& w);

/// Delta_w(O_B) = sum_{i in B} lambda_i - N(B).
Rational delta_structure(const CurveGraph& c, const Polarization& w,
                         Subcurve b);

/// Same value from already computed lambdas.
Rational delta_structure(const CurveGraph& c, std::span<const Rational> lambda,
                         Subcurve b);

/// lower < sum_{i in B} w_i < upper.
struct PolytopeInequality {
  Subcurve subcurve;
  Rational lower;
  Rational upper;
};

/// H-representation of the polarizations making O_C stable, one inequality
/// per complementary pair of proper connected subcurves.
struct StabilityPolytope {
  std::vector<PolytopeInequality> inequalities;
  /// Interior point, if one was found. Absence means "no witness found",
  /// not emptiness.
  std::optional<Polarization> witness;

  bool contains(const Polarization& w) const;
};

inline constexpr std::int64_t kDefaultWitnessDenominator = 24;

/// Throws Errc::unsupported when p_a(C) <= 1.
StabilityPolytope stability_polytope(
    const CurveGraph& c,
    std::int64_t max_denominator = kDefaultWitnessDenominator);

/// Calls `visit` with every weight vector whose common denominator q lies in
/// [1, max_denominator] and whose numerators are positive and sum to q, each
/// rational vector once (at its least q), ordered by q then lexicographically.
/// Returning false from `visit` stops the walk.
void for_each_grid_polarization(
    std::size_t gamma, std::int64_t max_denominator,
    const std::function<bool(const std::vector<std::int64_t>& numerators,
                             std::int64_t denominator)>& visit);

void check_dimension(const CurveGraph& c, const Polarization& w);

}  // namespace nodal
