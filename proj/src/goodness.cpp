#include "nodal/goodness.hpp"

#include "nodal/error.hpp"
#include "nodal/paths.hpp"

#include <limits>

namespace nodal {

const char* to_string(GoodnessStatus status) {
  switch (status) {
    case GoodnessStatus::good_certified: return "GoodCertified";
    case GoodnessStatus::not_good: return "NotGood";
    case GoodnessStatus::evidence_good: return "EvidenceGood";
  }
  return "?";
}

const char* to_string(ProbeOutcome outcome) {
  switch (outcome) {
    case ProbeOutcome::consistent: return "CONSISTENT";
    case ProbeOutcome::counterexample: return "DISCREPANCY:counterexample";
    case ProbeOutcome::internal_inconsistency:
      return "DISCREPANCY:internal-inconsistency";
  }
  return "?";
}

std::optional<std::size_t> sufficient_check(const CurveGraph& c,
                                            const Polarization& w) {
  check_dimension(c, w);
  for (std::size_t base = 0; base < c.num_components(); ++base) {
    const PathSystem ps = build_path_system(c, base);
    if (all_star2_satisfied(aj_family(c, w, ps))) return base;
  }
  return std::nullopt;
}

namespace {

__extension__ using Int128 = __int128;
__extension__ using UInt128 = unsigned __int128;

BigInt to_bigint(Int128 v) {
  const bool negative = v < 0;
  auto magnitude = static_cast<UInt128>(negative ? -v : v);
  BigInt out = static_cast<std::uint64_t>(magnitude >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(magnitude);
  return negative ? BigInt(-out) : out;
}

constexpr std::int64_t kScaleLimit = std::int64_t{1} << 40;
constexpr std::int64_t kFastRankLimit = std::int64_t{1} << 20;

// Odometer over {0..m}^gamma, last coordinate fastest, restricted to vectors
// whose maximum is exactly m. `visit` returns false to stop everything.
template <class Visit>
bool walk_level(std::size_t gamma, std::int64_t m, std::vector<std::int64_t>& r,
                Visit&& visit) {
  std::fill(r.begin(), r.end(), 0);
  while (true) {
    bool hits_max = false;
    for (const std::int64_t x : r) hits_max = hits_max || x == m;
    if (hits_max && !visit(r)) return false;
    std::size_t k = gamma;
    while (k > 0 && r[k - 1] == m) r[--k] = 0;
    if (k == 0) return true;
    ++r[k - 1];
  }
}

bool constant(const std::vector<std::int64_t>& r) {
  for (const std::int64_t x : r) {
    if (x != r.front()) return false;
  }
  return true;
}

template <class T, class Eval, class ToRational>
WitnessSearchResult run_search(const CurveGraph& c, std::int64_t max_rank,
                               Eval&& eval, ToRational&& to_rational) {
  WitnessSearchResult out;
  std::optional<T> best;
  std::vector<std::int64_t> r(c.num_components());
  for (std::int64_t m = 1; m <= max_rank; ++m) {
    const bool finished = walk_level(c.num_components(), m, r, [&](const auto& v) {
      ++out.evaluated;
      if (constant(v)) return true;  // locally free, Delta = 0
      const T value = eval(v);
      if (!best || value < *best) best = value;
      if (value <= 0) {
        out.witness = SheafWitness{SheafDatum::with_maximal_free_part(c, v),
                                   to_rational(value)};
        return false;
      }
      return true;
    });
    if (!finished) break;
  }
  if (best) out.delta_min = to_rational(*best);
  return out;
}

}  // namespace

WitnessSearchResult witness_search(const CurveGraph& c, const Polarization& w,
                                   std::int64_t max_rank) {
  if (max_rank < 1) {
    throw Error(Errc::unsupported, "max_rank must be at least 1");
  }
  const auto lambda = lambda_vector(c, w);
  const std::size_t gamma = c.num_components();

  BigInt scale = 1;
  for (const Rational& l : lambda) {
    scale = boost::multiprecision::lcm(scale, denominator_of(l));
  }
  bool fast = scale <= kScaleLimit && max_rank <= kFastRankLimit;
  std::vector<std::int64_t> scaled(gamma);
  for (std::size_t i = 0; fast && i < gamma; ++i) {
    const BigInt v = numerator_of(lambda[i]) * (scale / denominator_of(lambda[i]));
    if (boost::multiprecision::abs(v) > kScaleLimit) {
      fast = false;
    } else {
      scaled[i] = v.convert_to<std::int64_t>();
    }
  }

  if (fast) {
    // Delta * D = sum r_i (D lambda_i) - D sum_j min(r_a, r_b)
    const auto d = scale.convert_to<std::int64_t>();
    auto eval = [&](const std::vector<std::int64_t>& r) {
      Int128 sum = 0;
      for (std::size_t i = 0; i < gamma; ++i) {
        sum += static_cast<Int128>(r[i]) * scaled[i];
      }
      Int128 free = 0;
      for (const Node& n : c.nodes()) free += std::min(r[n.a], r[n.b]);
      return sum - free * d;
    };
    auto to_rational = [&](Int128 v) { return Rational(to_bigint(v), BigInt(d)); };
    return run_search<Int128>(c, max_rank, eval, to_rational);
  }

  auto eval = [&](const std::vector<std::int64_t>& r) -> Rational {
    Rational sum = 0;
    for (std::size_t i = 0; i < gamma; ++i) sum += lambda[i] * r[i];
    std::int64_t free = 0;
    for (const Node& n : c.nodes()) free += std::min(r[n.a], r[n.b]);
    return sum - free;
  };
  auto identity = [](const Rational& v) { return v; };
  return run_search<Rational>(c, max_rank, eval, identity);
}

GoodnessVerdict decide(const CurveGraph& c, const Polarization& w,
                       std::int64_t max_rank) {
  GoodnessVerdict out;
  const StabilityVerdict stability = oc_stability(c, w);
  if (!stability.stable) {
    const FailingSubcurve& f = *stability.failing;
    const Subcurve chosen =
        f.value <= 0 ? f.subcurve : f.subcurve.complement(c.num_components());
    SheafDatum datum = SheafDatum::of_subcurve(c, chosen);
    Rational delta = delta_general(c, w, datum);
    out.status = GoodnessStatus::not_good;
    out.witness = SheafWitness{std::move(datum), std::move(delta)};
    return out;
  }
  if (const auto base = sufficient_check(c, w)) {
    out.status = GoodnessStatus::good_certified;
    out.certificate_base = base;
    return out;
  }
  WitnessSearchResult search = witness_search(c, w, max_rank);
  out.delta_min = std::move(search.delta_min);
  if (search.witness) {
    out.status = GoodnessStatus::not_good;
    out.witness = std::move(search.witness);
  } else {
    out.status = GoodnessStatus::evidence_good;
    out.searched_rank_bound = max_rank;
  }
  return out;
}

ConjectureProbe conjecture_probe(const CurveGraph& c, const Polarization& w,
                                 std::int64_t max_rank) {
  ConjectureProbe probe;
  probe.stability = oc_stability(c, w);
  probe.goodness = decide(c, w, max_rank);
  const bool not_good = probe.goodness.status == GoodnessStatus::not_good;
  if (probe.stability.stable && not_good) {
    probe.outcome = ProbeOutcome::counterexample;
  } else if (!probe.stability.stable && !not_good) {
    probe.outcome = ProbeOutcome::internal_inconsistency;
  }
  return probe;
}

}  // namespace nodal
