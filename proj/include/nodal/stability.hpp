#pragma once

#include "nodal/curve.hpp"
#include "nodal/polarization.hpp"
#include "nodal/rational.hpp"
#include "nodal/sheaf.hpp"

#include <optional>
#include <vector>

namespace nodal {

struct FailingSubcurve {
  Subcurve subcurve;
  /// For O_C: Delta_w(O_B). For rank-one data: wdeg(E_B) - wdeg(E) wrank(E_B).
  Rational value;
};

struct StabilityVerdict {
  bool stable = false;
  bool semistable = false;
  /// First subcurve (ascending mask) where a strict inequality fails;
  /// present iff not stable.
  std::optional<FailingSubcurve> failing;
};

/// w-stability of O_C: 0 < Delta_w(O_B) < delta_B on every proper connected
/// subcurve. The closed-form answers for p_a = 0 and p_a = 1 are computed as
/// well and a disagreement throws identity_violation.
StabilityVerdict oc_stability(const CurveGraph& c, const Polarization& w);

/// Same inequalities from precomputed lambdas, without the cross-check.
StabilityVerdict oc_stability(const CurveGraph& c,
                              std::span<const Rational> lambda);

struct StarCondition {
  Subcurve subcurve;
  bool satisfied;
};

/// The weight-window form of the O_C inequalities:
/// (p_a(B)-1)/(p_a-1) < sum_B w_i < (p_a(B)-1+delta_B)/(p_a-1).
/// Throws Errc::unsupported when p_a(C) <= 1.
std::vector<StarCondition> star_conditions(const CurveGraph& c,
                                           const Polarization& w);

/// Stability of a datum with r_i = 1 everywhere via the subcurve criterion
/// wdeg(E_B) > wdeg(E) wrank(E_B) over all proper subcurves.
/// Throws Errc::unsupported for other ranks.
StabilityVerdict rank1_stability(const CurveGraph& c, const Polarization& w,
                                 const SheafDatum& e);

}  // namespace nodal
