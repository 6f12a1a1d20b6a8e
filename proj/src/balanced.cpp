#include "nodal/balanced.hpp"

#include "nodal/error.hpp"
#include "nodal/polarization.hpp"
#include "nodal/stability.hpp"

#include <numeric>

namespace nodal {

std::int64_t MultidegreeBundle::total() const {
  return std::accumulate(degrees.begin(), degrees.end(), std::int64_t{0});
}

bool MultidegreeBundle::ample() const {
  for (const std::int64_t d : degrees) {
    if (d < 1) return false;
  }
  return !degrees.empty();
}

std::int64_t omega_degree(const CurveGraph& c, Subcurve b) {
  return 2 * c.genus(b) - 2 + c.boundary(b);
}

BalanceReport check_balanced(const CurveGraph& c, const MultidegreeBundle& l) {
  if (l.degrees.size() != c.num_components()) {
    throw Error(Errc::dimension_mismatch,
                "multidegree needs one entry per component (" +
                    std::to_string(c.num_components()) + ")");
  }
  const std::int64_t pa = c.arithmetic_genus();
  if (pa < 2 || !classify(c).quasistable) {
    throw Error(Errc::unsupported,
                "balance is defined here for quasistable curves with p_a >= 2");
  }
  const Subcurve exceptional = exceptional_components(c);
  BalanceReport out;
  for (const std::size_t i : exceptional.members()) {
    if (l.degrees[i] != 1) out.bad_exceptional.push_back(i);
  }
  const Rational ratio = make_rational(l.total(), 2 * pa - 2);
  bool balanced = out.bad_exceptional.empty();
  bool strict = balanced;
  const std::uint64_t full = c.all().bits();
  for (std::uint64_t bits = 1; bits < full; ++bits) {
    const Subcurve b(bits);
    std::int64_t deg = 0;
    for (const std::size_t i : b.members()) deg += l.degrees[i];
    const Rational excess = deg - ratio * omega_degree(c, b);
    const Rational bound = make_rational(c.boundary(b), 2);
    const Rational size = excess < 0 ? Rational(-excess) : excess;
    if (size > bound) {
      balanced = strict = false;
      out.violations.push_back({b, excess, bound, false});
      continue;
    }
    if (size < bound) continue;
    // equality: allowed in the strict sense only when every boundary node
    // lies on an exceptional component
    bool exceptional_boundary = true;
    for (const Node& n : c.nodes()) {
      if (b.contains(n.a) == b.contains(n.b)) continue;
      if (!exceptional.contains(n.a) && !exceptional.contains(n.b)) {
        exceptional_boundary = false;
      }
    }
    if (!exceptional_boundary) {
      strict = false;
      out.violations.push_back({b, excess, bound, true});
    }
  }
  out.balanced = balanced;
  out.strictly_balanced = strict;
  return out;
}

bool is_balanced(const CurveGraph& c, const MultidegreeBundle& l) {
  return check_balanced(c, l).balanced;
}

bool is_strictly_balanced(const CurveGraph& c, const MultidegreeBundle& l) {
  return check_balanced(c, l).strictly_balanced;
}

BridgeReport balanced_stability_bridge(const CurveGraph& c,
                                       const MultidegreeBundle& l) {
  BridgeReport out;
  if (l.degrees.size() != c.num_components()) {
    out.reason = "multidegree length does not match the curve";
    return out;
  }
  if (!l.ample()) {
    out.reason = "multidegree is not ample";
    return out;
  }
  const CurveClass cls = classify(c);
  if (!cls.stable) {
    out.reason = "curve is not stable";
    return out;
  }
  if (l.total() != c.arithmetic_genus() - 1) {
    out.reason = "total degree is not p_a - 1";
    return out;
  }
  out.applicable = true;
  const Polarization w = from_multidegree(c, l.degrees);
  out.strictly_balanced = is_strictly_balanced(c, l);
  out.oc_stable = oc_stability(c, w).stable;
  out.consistent = out.strictly_balanced == out.oc_stable;
  if (cls.compact_type) {
    out.goodness = decide(c, w, default_max_rank(c)).status;
    const bool certified = *out.goodness == GoodnessStatus::good_certified;
    out.consistent = out.consistent && certified == out.strictly_balanced;
  }
  return out;
}

}  // namespace nodal
