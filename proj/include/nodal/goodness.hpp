#pragma once

#include "nodal/curve.hpp"
#include "nodal/polarization.hpp"
#include "nodal/rational.hpp"
#include "nodal/sheaf.hpp"
#include "nodal/stability.hpp"

#include <cstdint>
#include <optional>

namespace nodal {

enum class GoodnessStatus { good_certified, not_good, evidence_good };

const char* to_string(GoodnessStatus status);

struct SheafWitness {
  SheafDatum datum;
  Rational delta;
};

struct GoodnessVerdict {
  GoodnessStatus status = GoodnessStatus::evidence_good;
  /// Base component index whose path system satisfies every (**) condition.
  std::optional<std::size_t> certificate_base;
  /// Present iff not_good.
  std::optional<SheafWitness> witness;
  /// Present iff evidence_good.
  std::optional<std::int64_t> searched_rank_bound;
  /// Smallest Delta over the non-locally-free data visited by a rank search,
  /// when one ran.
  std::optional<Rational> delta_min;
};

/// First base (component index) whose A_j family satisfies all (**)
/// conditions, if any.
std::optional<std::size_t> sufficient_check(const CurveGraph& c,
                                            const Polarization& w);

struct WitnessSearchResult {
  std::optional<SheafWitness> witness;
  /// Minimum Delta over visited non-locally-free data (all of them when no
  /// witness was found).
  std::optional<Rational> delta_min;
  std::uint64_t evaluated = 0;
};

/// Rank vectors r in {0..max_rank}^gamma minus 0, ordered by max entry and then
/// lexicographically, each with s_j = min of the endpoint ranks and zero
/// degrees. Stops at the first datum with Delta < 0, or Delta = 0 and not
/// locally free.
WitnessSearchResult witness_search(const CurveGraph& c, const Polarization& w,
                                   std::int64_t max_rank);

inline std::int64_t default_max_rank(const CurveGraph& c) {
  return 2 * static_cast<std::int64_t>(c.num_components());
}

GoodnessVerdict decide(const CurveGraph& c, const Polarization& w,
                       std::int64_t max_rank);

enum class ProbeOutcome { consistent, counterexample, internal_inconsistency };

const char* to_string(ProbeOutcome outcome);

struct ConjectureProbe {
  StabilityVerdict stability;
  GoodnessVerdict goodness;
  ProbeOutcome outcome = ProbeOutcome::consistent;
  bool discrepancy() const { return outcome != ProbeOutcome::consistent; }
};

ConjectureProbe conjecture_probe(const CurveGraph& c, const Polarization& w,
                                 std::int64_t max_rank);

}  // namespace nodal
