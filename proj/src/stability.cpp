#include "nodal/stability.hpp"

#include "nodal/error.hpp"

namespace nodal {

namespace {

// Closed forms for p_a <= 1 on reducible curves; nullopt otherwise.
std::optional<StabilityVerdict> low_genus_verdict(const CurveGraph& c) {
  if (c.num_components() < 2) return std::nullopt;
  const std::int64_t pa = c.arithmetic_genus();
  if (pa == 0) return StabilityVerdict{true, true, std::nullopt};
  if (pa == 1) {
    const bool cycle = classify(c).cycle_of_rationals;
    return StabilityVerdict{cycle, true, std::nullopt};
  }
  return std::nullopt;
}

}  // namespace

StabilityVerdict oc_stability(const CurveGraph& c,
                              std::span<const Rational> lambda) {
  StabilityVerdict out{true, true, std::nullopt};
  for_each_proper_connected_subcurve(c, [&](Subcurve b) {
    const Rational delta = delta_structure(c, lambda, b);
    const std::int64_t db = c.boundary(b);
    if (!(0 < delta && delta < db)) {
      if (out.stable) out.failing = FailingSubcurve{b, delta};
      out.stable = false;
      if (delta < 0 || delta > db) out.semistable = false;
    }
  });
  return out;
}

StabilityVerdict oc_stability(const CurveGraph& c, const Polarization& w) {
  const auto lambda = lambda_vector(c, w);
  StabilityVerdict out = oc_stability(c, lambda);
  if (const auto shortcut = low_genus_verdict(c)) {
    if (shortcut->stable != out.stable ||
        shortcut->semistable != out.semistable) {
      throw Error(Errc::identity_violation,
                  "low-genus closed form disagrees with subcurve enumeration");
    }
  }
  return out;
}

std::vector<StarCondition> star_conditions(const CurveGraph& c,
                                           const Polarization& w) {
  check_dimension(c, w);
  const std::int64_t pa = c.arithmetic_genus();
  if (pa <= 1) {
    throw Error(Errc::unsupported,
                "weight-window conditions need p_a >= 2");
  }
  std::vector<StarCondition> out;
  for_each_proper_connected_subcurve(c, [&](Subcurve b) {
    const std::int64_t pb = c.genus(b);
    const Rational x = w.weight_of(b);
    const bool ok = make_rational(pb - 1, pa - 1) < x &&
                    x < make_rational(pb - 1 + c.boundary(b), pa - 1);
    out.push_back({b, ok});
  });
  return out;
}

StabilityVerdict rank1_stability(const CurveGraph& c, const Polarization& w,
                                 const SheafDatum& e) {
  validate(c, e);
  check_dimension(c, w);
  for (const std::int64_t r : e.ranks) {
    if (r != 1) {
      throw Error(Errc::unsupported,
                  "the subcurve criterion needs rank one on every component");
    }
  }
  const Rational wdeg = slope_report(c, w, e).wdeg;
  StabilityVerdict out{true, true, std::nullopt};
  const std::uint64_t full = c.all().bits();
  for (std::uint64_t bits = 1; bits < full; ++bits) {
    const Subcurve b(bits);
    const Rational slack = restrict_to(c, w, e, b).wdeg - wdeg * w.weight_of(b);
    if (slack <= 0) {
      if (out.stable) out.failing = FailingSubcurve{b, slack};
      out.stable = false;
      if (slack < 0) out.semistable = false;
    }
  }
  return out;
}

}  // namespace nodal
