#pragma once

// Curve and polarization corpora, seeded random generators and conjecture
// campaigns.
//
// Randomness comes from std::mt19937_64, whose output sequence is fixed by
// the C++ standard. The standard distributions are not, so bounded draws use
// rejection sampling on raw 64-bit outputs. Per-instance streams are derived
// from (seed, instance index) with the SplitMix64 finalizer, which keeps the
// results independent of how instances are spread over threads.

#include "nodal/curve.hpp"
#include "nodal/goodness.hpp"
#include "nodal/polarization.hpp"
#include "nodal/sheaf.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace nodal {

std::uint64_t splitmix64(std::uint64_t x);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Stream for a given instance of a seeded run.
  static Rng for_stream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
  }
  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);
  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);

 private:
  std::mt19937_64 engine_;
};

/// Random connected curve: a random tree plus extra random nodes.
CurveGraph random_curve(Rng& rng, std::size_t max_vertices,
                        std::size_t max_edges, std::int64_t max_genus);

/// Uniform draw from the reduced grid of polarizations with denominator at
/// most `max_denominator` (see for_each_grid_polarization).
Polarization random_polarization(Rng& rng, std::size_t gamma,
                                 std::int64_t max_denominator);

/// Random valid datum: ranks in [0, max_rank] (not all zero), s_j uniform in
/// [0, min r], degrees in [-max_degree, max_degree] where the rank is positive.
SheafDatum random_sheaf(Rng& rng, const CurveGraph& c, std::int64_t max_rank,
                        std::int64_t max_degree = 3);

enum class CurveFilter { all, compact_type, genus_at_most_one, stable };

enum class SearchMode { exhaustive, random };

struct CampaignConfig {
  std::size_t max_vertices = 3;
  std::size_t max_edges = 3;
  std::int64_t max_genus = 1;
  std::int64_t weight_denominator_bound = 6;
  /// 0 means 3 * gamma for each curve.
  std::int64_t max_rank = 0;
  std::uint64_t seed = 0;
  SearchMode mode = SearchMode::exhaustive;
  /// Polarizations per curve in random mode.
  std::size_t sample_count = 16;
  CurveFilter filter = CurveFilter::all;
  std::size_t threads = 1;
  /// Random sheaf data per instance fed through the identity suite.
  std::size_t identity_samples = 2;
};

/// Throws Errc::unsupported on bounds below 1 (max_edges may be 0).
void validate(const CampaignConfig& cfg);

/// Connected loopless decorated multigraphs with at most max_vertices
/// components, max_edges nodes and genera at most max_genus, passing the
/// filter. For gamma <= 5 one representative per isomorphism class, relabelled
/// to its canonical form. Ordered by (gamma, delta, canonical key).
std::vector<CurveGraph> enumerate_curves(const CampaignConfig& cfg);

/// Exhaustive mode: the reduced grid in order. Random mode: sample_count
/// uniform grid draws from the stream (seed, stream).
std::vector<Polarization> sample_polarizations(const CurveGraph& c,
                                               const CampaignConfig& cfg,
                                               std::uint64_t stream = 0);

/// 64-bit FNV-1a of the genus list and node list.
std::uint64_t curve_hash(const CurveGraph& c);

/// Identity checks on one instance; returns one message per failure.
/// Covers sum lambda = delta, agreement of the three Delta formulas, the
/// restriction/tensor/disjoint-support identities, both path identities,
/// slope bookkeeping, the NotGood witness, the compact-type theorem and the
/// p_a <= 1 classification.
std::vector<std::string> identity_suite(const CurveGraph& c,
                                        const Polarization& w,
                                        const ConjectureProbe& probe,
                                        Rng& rng, std::size_t samples);

struct DiscrepancyRecord {
  std::uint64_t instance;
  std::uint64_t curve_hash;
  CurveGraph curve;
  Polarization polarization;
  ProbeOutcome outcome;
  bool stable;
  GoodnessStatus status;
};

struct IdentityFailure {
  std::uint64_t instance;
  std::uint64_t curve_hash;
  std::string message;
};

struct CampaignReport {
  std::uint64_t curves_checked = 0;
  std::uint64_t instances_checked = 0;
  std::uint64_t stable_count = 0;
  std::uint64_t certified_count = 0;
  std::uint64_t not_good_count = 0;
  std::uint64_t evidence_count = 0;
  std::vector<DiscrepancyRecord> discrepancies;
  std::vector<IdentityFailure> identity_failures;
  /// FNV-1a over all CSV rows; equal configs give equal digests.
  std::uint64_t digest = 0;
  std::int64_t wall_time_ms = 0;

  bool consistent() const {
    return discrepancies.empty() && identity_failures.empty();
  }
};

inline constexpr const char* kCampaignCsvHeader =
    "instance,curve_hash,gamma,delta,weights,stable,semistable,goodness,"
    "certificate_base,delta_min,outcome";

/// Runs the probe and identity suite on every instance. When `csv` is given,
/// the header and one row per instance are written to it in instance order.
CampaignReport run_campaign(const CampaignConfig& cfg,
                            std::ostream* csv = nullptr);

}  // namespace nodal
