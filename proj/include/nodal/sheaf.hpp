#pragma once

// Numerical data of a depth-one (torsion-free) sheaf on a nodal curve: the
// rank r_i and degree d_i of each restriction E_i modulo torsion, and the rank
// s_j of the free part of the stalk at each node. At a node joining C_a and
// C_b the stalk splits as O^s + O_{q_a}^{r_a - s} + O_{q_b}^{r_b - s}; the
// residual rank is t_j = r_a + r_b - 2 s_j.
//
// The data are taken as given: whether a sheaf with these numbers exists is
// not checked beyond the local constraints.

#include "nodal/curve.hpp"
#include "nodal/polarization.hpp"
#include "nodal/rational.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace nodal {

struct SheafDatum {
  std::vector<std::int64_t> ranks;       // per component
  std::vector<std::int64_t> degrees;     // per component, 0 where rank is 0
  std::vector<std::int64_t> stalk_free;  // per node, in node-id order

  /// O_C: rank one everywhere, free at every node, degree zero.
  static SheafDatum structure_sheaf(const CurveGraph& c);
  /// O_B pushed forward to C: ranks 1_B, free at nodes internal to B.
  static SheafDatum of_subcurve(const CurveGraph& c, Subcurve b);
  /// Given ranks, the degree-zero datum with the largest admissible free
  /// parts s_j = min(r_a, r_b).
  static SheafDatum with_maximal_free_part(const CurveGraph& c,
                                           std::vector<std::int64_t> ranks);

  bool operator==(const SheafDatum&) const = default;
};

/// Throws Error{Errc::invalid_sheaf} (or dimension_mismatch) naming the
/// violated constraint.
void validate(const CurveGraph& c, const SheafDatum& e);

/// Components where the rank is positive.
Subcurve support(const SheafDatum& e);

/// t_j per node.
std::vector<std::int64_t> residual_ranks(const CurveGraph& c,
                                         const SheafDatum& e);

/// True iff every residual rank vanishes and the support is the whole curve.
bool is_locally_free(const CurveGraph& c, const SheafDatum& e);

struct SlopeReport {
  Rational wrank;
  std::int64_t chi = 0;
  Rational wdeg;
  std::optional<Rational> wslope;  // absent when wrank = 0
};

SlopeReport slope_report(const CurveGraph& c, const Polarization& w,
                         const SheafDatum& e);

/// Delta_w(E) = sum r_i lambda_i - sum s_j.
Rational delta_general(const CurveGraph& c, const Polarization& w,
                       const SheafDatum& e);
Rational delta_general(const CurveGraph& c, std::span<const Rational> lambda,
                       const SheafDatum& e);

/// Delta_w(E) = sum r_i (lambda_i - delta_i/2) + (1/2) sum t_j.
Rational delta_residual(const CurveGraph& c, const Polarization& w,
                        const SheafDatum& e);
Rational delta_residual(const CurveGraph& c, std::span<const Rational> lambda,
                        const SheafDatum& e);

struct RestrictionValues {
  Rational delta;  // Delta_w(E_B)
  Rational wdeg;   // Delta_w(E_B) + sum_{i in B} d_i
};

/// Delta_w(E_B) = sum_{i in B} r_i lambda_i - sum_{j internal to B} s_j.
RestrictionValues restrict_to(const CurveGraph& c, const Polarization& w,
                              const SheafDatum& e, Subcurve b);

/// E tensor L for L of multidegree l: d_i -> d_i + r_i l_i.
SheafDatum tensor_by_multidegree(const SheafDatum& e,
                                 std::span<const std::int64_t> l);

}  // namespace nodal
