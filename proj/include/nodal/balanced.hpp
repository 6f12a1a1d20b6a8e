#pragma once

// Balanced multidegrees of line bundles, compared against the degree of the
// dualizing sheaf on subcurves.

#include "nodal/curve.hpp"
#include "nodal/goodness.hpp"
#include "nodal/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nodal {

struct MultidegreeBundle {
  std::vector<std::int64_t> degrees;

  std::int64_t total() const;
  bool ample() const;
};

/// deg(omega_C restricted to B) = 2 p_a(B) - 2 + delta_B. Throws on empty B.
std::int64_t omega_degree(const CurveGraph& c, Subcurve b);

struct BalanceViolation {
  Subcurve subcurve;
  /// deg_B(L) - d/(2p_a - 2) * omega_B
  Rational excess;
  /// delta_B / 2
  Rational bound;
  /// true if only the strict inequality fails (|excess| = bound)
  bool boundary_only;
};

struct BalanceReport {
  bool balanced = false;
  bool strictly_balanced = false;
  /// Exceptional components where deg_E(L) != 1, by index.
  std::vector<std::size_t> bad_exceptional;
  /// Subcurves violating the balancing inequality (non-strictly), or
  /// violating it strictly where strictness is required.
  std::vector<BalanceViolation> violations;
};

/// Throws Errc::unsupported unless c is quasistable with p_a >= 2, and
/// dimension_mismatch on length.
BalanceReport check_balanced(const CurveGraph& c, const MultidegreeBundle& l);
bool is_balanced(const CurveGraph& c, const MultidegreeBundle& l);
bool is_strictly_balanced(const CurveGraph& c, const MultidegreeBundle& l);

struct BridgeReport {
  bool applicable = false;
  std::string reason;  // why not applicable
  bool strictly_balanced = false;
  bool oc_stable = false;
  /// Only on compact type.
  std::optional<GoodnessStatus> goodness;
  /// All checked equivalences hold.
  bool consistent = true;
};

/// For ample L on a stable curve with total degree p_a - 1: strict balance
/// of L against stability of O_C for the induced polarization, and on compact
/// type against a certified goodness verdict.
BridgeReport balanced_stability_bridge(const CurveGraph& c,
                                       const MultidegreeBundle& l);

}  // namespace nodal
