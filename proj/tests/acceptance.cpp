// Acceptance runner: one PASS/FAIL line per criterion. All comparisons are
// exact rational equalities; the only tolerances are the wall-clock limits
// below.

#include "nodal/balanced.hpp"
#include "nodal/error.hpp"
#include "nodal/goodness.hpp"
#include "nodal/paths.hpp"
#include "nodal/polarization.hpp"
#include "nodal/search.hpp"
#include "nodal/sheaf.hpp"
#include "nodal/stability.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

using namespace nodal;

namespace {

constexpr double kLimitC1 = 1.0;
constexpr double kLimitC2 = 30.0;
constexpr double kLimitC3 = 300.0;
constexpr double kLimitC4 = 300.0;
constexpr double kLimitC5 = 300.0;
constexpr double kLimitC6 = 300.0;
constexpr double kLimitC7 = 900.0;  // per campaign run
constexpr double kLimitC8 = 300.0;

constexpr std::size_t kC5Tuples = 10000;
constexpr std::uint64_t kC5Seed = 20240501;
constexpr std::uint64_t kC7Seed = 7;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::size_t failures = 0;
  std::string first_failure;

  void fail(const std::string& why) {
    pass = false;
    if (failures++ == 0) first_failure = why;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string describe(const CurveGraph& c) {
  std::ostringstream out;
  out << "g=(";
  for (std::size_t i = 0; i < c.num_components(); ++i) {
    out << (i ? "," : "") << c.component(i).genus;
  }
  out << ") nodes=";
  for (const Node& n : c.nodes()) out << "[" << n.a << n.b << "]";
  return out.str();
}

std::string describe(const Polarization& w) {
  std::string out = "w=(";
  for (std::size_t i = 0; i < w.size(); ++i) {
    out += (i ? "," : "") + format_rational(w[i]);
  }
  return out + ")";
}

std::vector<Polarization> grid(std::size_t gamma, std::int64_t max_denominator) {
  std::vector<Polarization> out;
  for_each_grid_polarization(gamma, max_denominator, [&](const auto& num, std::int64_t q) {
    std::vector<Rational> w;
    for (const auto x : num) w.push_back(make_rational(x, q));
    out.emplace_back(std::move(w));
    return true;
  });
  return out;
}

CampaignConfig bounds(std::size_t v, std::size_t e, std::int64_t g, CurveFilter f) {
  CampaignConfig cfg;
  cfg.max_vertices = v;
  cfg.max_edges = e;
  cfg.max_genus = g;
  cfg.filter = f;
  return cfg;
}

CurveGraph rational_cycle(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> ends;
  for (std::size_t i = 0; i < n; ++i) ends.emplace_back(i, (i + 1) % n);
  return CurveGraph::from_indices(std::vector<std::int64_t>(n, 0), ends);
}

// Connected pieces of the support, by flood fill over nodes with both ends
// in the support.
std::vector<Subcurve> support_components(const CurveGraph& c, const SheafDatum& e) {
  std::vector<Subcurve> out;
  std::uint64_t seen = 0;
  for (std::size_t s = 0; s < c.num_components(); ++s) {
    if (e.ranks[s] == 0 || ((seen >> s) & 1U)) continue;
    std::uint64_t piece = std::uint64_t{1} << s;
    bool grew = true;
    while (grew) {
      grew = false;
      for (const Node& n : c.nodes()) {
        if (e.ranks[n.a] == 0 || e.ranks[n.b] == 0) continue;
        const bool ia = (piece >> n.a) & 1U;
        const bool ib = (piece >> n.b) & 1U;
        if (ia != ib) {
          piece |= (std::uint64_t{1} << n.a) | (std::uint64_t{1} << n.b);
          grew = true;
        }
      }
    }
    seen |= piece;
    out.emplace_back(piece);
  }
  return out;
}

SheafDatum keep_only(const CurveGraph& c, const SheafDatum& e, Subcurve b) {
  SheafDatum out = e;
  for (std::size_t i = 0; i < c.num_components(); ++i) {
    if (!b.contains(i)) out.ranks[i] = out.degrees[i] = 0;
  }
  for (std::size_t j = 0; j < c.num_nodes(); ++j) {
    if (!b.contains(c.node(j).a) || !b.contains(c.node(j).b)) out.stalk_free[j] = 0;
  }
  return out;
}

Outcome criterion1() {
  Outcome out;
  const CurveGraph c = CurveGraph::from_indices({2, 2}, {{0, 1}});
  const Polarization w({make_rational(1, 6), make_rational(5, 6)});
  const Rational d = delta_structure(c, w, Subcurve::single(0));
  if (d != make_rational(-1, 2)) out.fail("Delta(O_C1) = " + format_rational(d));
  if (oc_stability(c, w).stable) out.fail("O_C reported stable");
  const GoodnessVerdict v = decide(c, w, default_max_rank(c));
  if (v.status != GoodnessStatus::not_good || !v.witness) {
    out.fail(std::string("verdict ") + to_string(v.status));
  } else if (v.witness->datum.ranks != std::vector<std::int64_t>{1, 0}) {
    out.fail("witness ranks are not (1,0)");
  } else if (delta_general(c, w, v.witness->datum) != make_rational(-1, 2)) {
    out.fail("witness Delta is not -1/2");
  }
  out.detail = "Delta(O_C1)=" + format_rational(d) + ", NotGood witness r=(1,0)";
  return out;
}

Outcome criterion2() {
  Outcome out;
  const auto curves = enumerate_curves(bounds(4, 6, 3, CurveFilter::stable));
  for (const CurveGraph& c : curves) {
    const Polarization eta = canonical_polarization(c);
    const auto lambda = lambda_vector(c, eta);
    for (std::size_t i = 0; i < c.num_components(); ++i) {
      const auto deg = static_cast<std::int64_t>(c.incident_nodes(i).size());
      if (lambda[i] != make_rational(deg, 2)) out.fail(describe(c) + ": lambda != delta_i/2");
    }
    for (std::size_t base = 0; base < c.num_components(); ++base) {
      if (!all_star2_satisfied(aj_family(c, eta, build_path_system(c, base)))) {
        out.fail(describe(c) + ": (**) fails at base " + std::to_string(base));
      }
    }
    if (decide(c, eta, default_max_rank(c)).status != GoodnessStatus::good_certified) {
      out.fail(describe(c) + ": canonical polarization not certified");
    }
  }
  out.detail = std::to_string(curves.size()) + " stable curves (gamma<=4, delta<=6, g<=3)";
  return out;
}

Outcome criterion3() {
  Outcome out;
  const auto curves = enumerate_curves(bounds(5, 4, 2, CurveFilter::compact_type));
  std::size_t instances = 0;
  std::size_t stable = 0;
  for (const CurveGraph& c : curves) {
    for (const Polarization& w : grid(c.num_components(), 12)) {
      ++instances;
      const bool s = oc_stability(c, w).stable;
      const GoodnessVerdict v = decide(c, w, default_max_rank(c));
      stable += s;
      if (s != (v.status != GoodnessStatus::not_good)) {
        out.fail(describe(c) + " " + describe(w) + ": stability and goodness disagree");
      }
      if (s && v.status != GoodnessStatus::good_certified) {
        out.fail(describe(c) + " " + describe(w) + ": stable but not certified");
      }
    }
  }
  out.detail = std::to_string(curves.size()) + " compact-type curves, " +
               std::to_string(instances) + " pairs, " + std::to_string(stable) + " stable";
  return out;
}

Outcome criterion4() {
  Outcome out;
  constexpr std::int64_t kDenominator = 10;
  std::size_t trees = 0;
  std::size_t elliptic = 0;
  std::size_t cycles = 0;
  const auto check_good = [&](const CurveGraph& c) {
    for (const Polarization& w : grid(c.num_components(), kDenominator)) {
      const StabilityVerdict s = oc_stability(c, w);
      const GoodnessVerdict v = decide(c, w, default_max_rank(c));
      if (!s.stable || v.status != GoodnessStatus::good_certified) {
        out.fail(describe(c) + " " + describe(w) + ": expected stable and certified");
      }
    }
  };
  for (const CurveGraph& c : enumerate_curves(bounds(5, 4, 1, CurveFilter::compact_type))) {
    const std::int64_t pa = c.arithmetic_genus();
    if (pa == 0) {
      ++trees;
      check_good(c);
    } else if (pa == 1 && c.num_components() >= 2) {
      ++elliptic;
      for (const Polarization& w : grid(c.num_components(), kDenominator)) {
        const StabilityVerdict s = oc_stability(c, w);
        const GoodnessVerdict v = decide(c, w, default_max_rank(c));
        bool ok = s.semistable && !s.stable && v.status == GoodnessStatus::not_good &&
                  v.witness.has_value();
        if (ok) {
          const Rational d = delta_general(c, w, v.witness->datum);
          ok = d == v.witness->delta &&
               (d < 0 || (d == 0 && !is_locally_free(c, v.witness->datum)));
        }
        if (!ok) out.fail(describe(c) + " " + describe(w) + ": expected strictly semistable, NotGood");
      }
    }
  }
  for (std::size_t n = 2; n <= 5; ++n) {
    ++cycles;
    check_good(rational_cycle(n));
  }
  out.detail = std::to_string(trees) + " genus-0 trees, " + std::to_string(cycles) +
               " rational cycles, " + std::to_string(elliptic) +
               " compact-type p_a=1 curves (denominator<=" + std::to_string(kDenominator) + ")";
  return out;
}

Outcome criterion5() {
  Outcome out;
  Rng rng(kC5Seed);
  for (std::size_t k = 0; k < kC5Tuples; ++k) {
    const CurveGraph c = random_curve(rng, 7, 9, 3);
    const std::size_t gamma = c.num_components();
    const Polarization w = random_polarization(rng, gamma, 30);
    const SheafDatum e = random_sheaf(rng, c, 4);
    const std::size_t base = rng.below(gamma);
    const std::string tag = "tuple " + std::to_string(k) + " " + describe(c) + " " + describe(w);
    try {
      const auto lambda = lambda_vector(c, w);
      const Rational lambda_sum = std::accumulate(lambda.begin(), lambda.end(), Rational(0));
      if (lambda_sum != static_cast<std::int64_t>(c.num_nodes())) out.fail(tag + ": sum lambda != delta");

      const PathSystem ps = build_path_system(c, base);
      verify_path_system(c, ps);
      const AjFamily fam = aj_family(c, w, ps);
      const Rational dg = delta_general(c, w, e);
      const Rational dr = delta_residual(c, w, e);
      const Rational dd = delta_decomposed(c, w, ps, fam, e);
      if (dg != dr || dg != dd) out.fail(tag + ": Delta formulas disagree");
      verify_path_identities(c, ps, e);

      // locally free data have Delta = 0
      const std::int64_t r = rng.between(1, 3);
      SheafDatum free = SheafDatum::with_maximal_free_part(c, std::vector<std::int64_t>(gamma, r));
      if (delta_general(c, w, free) != 0) out.fail(tag + ": locally free Delta != 0");

      // equal rank: Delta = t/2, zero iff locally free
      SheafDatum equal = free;
      for (auto& s : equal.stalk_free) s = rng.between(0, r);
      const auto t = residual_ranks(c, equal);
      const std::int64_t tsum = std::accumulate(t.begin(), t.end(), std::int64_t{0});
      const Rational de = delta_general(c, w, equal);
      if (de != make_rational(tsum, 2) || (de == 0) != is_locally_free(c, equal)) {
        out.fail(tag + ": equal-rank identity fails");
      }

      // tensor invariance
      std::vector<std::int64_t> l(gamma);
      for (auto& x : l) x = rng.between(-4, 4);
      if (delta_general(c, w, tensor_by_multidegree(e, l)) != dg) out.fail(tag + ": tensor changed Delta");

      // additivity over connected pieces of the support
      Rational pieces = 0;
      for (const Subcurve p : support_components(c, e)) pieces += delta_general(c, w, keep_only(c, e, p));
      if (pieces != dg) out.fail(tag + ": Delta not additive over the support");

      if (gamma >= 2) {
        const Subcurve b(1 + rng.below(c.all().bits() - 1));
        const Subcurve bc = b.complement(gamma);
        // restriction additivity
        std::int64_t boundary_free = 0;
        for (std::size_t j = 0; j < c.num_nodes(); ++j) {
          if (b.contains(c.node(j).a) != b.contains(c.node(j).b)) boundary_free += e.stalk_free[j];
        }
        if (restrict_to(c, w, e, b).delta + restrict_to(c, w, e, bc).delta - dg != boundary_free) {
          out.fail(tag + ": restriction additivity fails");
        }
        // locally free rank r restricts to r * Delta(O_B)
        if (restrict_to(c, w, free, b).delta != r * delta_structure(c, w, b)) {
          out.fail(tag + ": locally free restriction != r Delta(O_B)");
        }
      }
    } catch (const Error& err) {
      out.fail(tag + ": " + err.what());
    }
  }
  out.detail = std::to_string(kC5Tuples) + " seeded tuples (seed " + std::to_string(kC5Seed) + ")";
  return out;
}

Outcome criterion6() {
  Outcome out;
  std::size_t bundles = 0;
  std::size_t compact = 0;
  std::size_t strict = 0;
  const auto curves = enumerate_curves(bounds(3, 6, 3, CurveFilter::stable));
  for (const CurveGraph& c : curves) {
    const std::size_t gamma = c.num_components();
    const std::int64_t d = c.arithmetic_genus() - 1;
    if (d < static_cast<std::int64_t>(gamma)) continue;
    MultidegreeBundle l{std::vector<std::int64_t>(gamma, 1)};
    while (true) {
      if (l.total() == d) {
        ++bundles;
        const BridgeReport r = balanced_stability_bridge(c, l);
        if (!r.applicable) {
          out.fail(describe(c) + ": bridge not applicable (" + r.reason + ")");
        } else {
          if (!r.consistent || r.strictly_balanced != r.oc_stable) {
            out.fail(describe(c) + ": strict balance and stability disagree");
          }
          strict += r.strictly_balanced;
          if (classify(c).compact_type) {
            ++compact;
            if (!r.goodness ||
                (*r.goodness == GoodnessStatus::good_certified) != r.strictly_balanced) {
              out.fail(describe(c) + ": compact type goodness disagrees with balance");
            }
          }
        }
      }
      std::size_t k = 0;
      while (k < gamma && l.degrees[k] == d) l.degrees[k++] = 1;
      if (k == gamma) break;
      ++l.degrees[k];
    }
  }
  out.detail = std::to_string(curves.size()) + " stable curves (gamma<=3, delta<=6, g<=3), " +
               std::to_string(bundles) + " multidegrees, " + std::to_string(strict) +
               " strictly balanced, " + std::to_string(compact) + " on compact type";
  return out;
}

Outcome criterion7() {
  Outcome out;
  CampaignConfig cfg = bounds(4, 5, 2, CurveFilter::all);
  cfg.weight_denominator_bound = 12;
  cfg.max_rank = 0;  // 3 * gamma per curve
  cfg.seed = kC7Seed;
  cfg.threads = 1;
  auto t0 = Clock::now();
  const CampaignReport a = run_campaign(cfg);
  const double ta = seconds_since(t0);
  cfg.threads = 2;
  t0 = Clock::now();
  const CampaignReport b = run_campaign(cfg);
  const double tb = seconds_since(t0);
  if (!a.discrepancies.empty()) out.fail(std::to_string(a.discrepancies.size()) + " discrepancies");
  if (!a.identity_failures.empty()) {
    out.fail(std::to_string(a.identity_failures.size()) + " identity failures, first: " +
             a.identity_failures.front().message);
  }
  if (a.digest != b.digest || a.instances_checked != b.instances_checked) {
    out.fail("digest differs between runs");
  }
  if (ta > kLimitC7 || tb > kLimitC7) out.fail("campaign run over the time limit");
  std::ostringstream d;
  d << a.curves_checked << " curves, " << a.instances_checked << " instances, "
    << a.stable_count << " stable, " << a.certified_count << " certified, "
    << a.evidence_count << " evidence, " << a.not_good_count << " not good, digest " << std::hex
    << a.digest << std::dec << " (runs " << static_cast<int>(ta) << "s/" << static_cast<int>(tb)
    << "s)";
  out.detail = d.str();
  return out;
}

Outcome criterion8() {
  Outcome out;
  constexpr std::int64_t kRank = 3;
  std::size_t checked = 0;
  const auto curves = enumerate_curves(bounds(3, 4, 2, CurveFilter::all));
  for (const CurveGraph& c : curves) {
    const std::size_t gamma = c.num_components();
    const std::size_t delta = c.num_nodes();
    for (const Polarization& w : grid(gamma, 4)) {
      std::vector<std::int64_t> r(gamma, 0);
      while (true) {
        std::size_t k = 0;
        while (k < gamma && r[k] == kRank) r[k++] = 0;
        if (k == gamma) break;
        ++r[k];
        const SheafDatum best = SheafDatum::with_maximal_free_part(c, r);
        const Rational at_min = delta_general(c, w, best);
        // walk every admissible s
        SheafDatum e = best;
        std::fill(e.stalk_free.begin(), e.stalk_free.end(), 0);
        while (true) {
          ++checked;
          if (delta_general(c, w, e) < at_min) {
            out.fail(describe(c) + " " + describe(w) + ": smaller Delta away from s=min");
          }
          std::size_t j = 0;
          while (j < delta && e.stalk_free[j] == best.stalk_free[j]) e.stalk_free[j++] = 0;
          if (j == delta) break;
          ++e.stalk_free[j];
        }
      }
    }
  }
  out.detail = std::to_string(curves.size()) + " curves (gamma<=3, delta<=4, g<=2), " +
               std::to_string(checked) + " data with ranks<=3";
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"C1 worked example g=(2,2), w=(1/6,5/6)", kLimitC1, criterion1},
      {"C2 canonical polarization certifies", kLimitC2, criterion2},
      {"C3 compact-type equivalence", kLimitC3, criterion3},
      {"C4 p_a <= 1 classification", kLimitC4, criterion4},
      {"C5 Delta formulas and identities", kLimitC5, criterion5},
      {"C6 balanced bridge", kLimitC6, criterion6},
      {"C7 conjecture campaign", 2 * kLimitC7, criterion7},
      {"C8 minimal free part optimality", kLimitC8, criterion8},
  };
  bool all = true;
  for (const Criterion& c : criteria) {
    const auto t0 = Clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.fail(std::string("exception: ") + e.what());
    }
    const double secs = seconds_since(t0);
    if (secs > c.limit) out.fail("time limit exceeded");
    all = all && out.pass;
    std::cout << (out.pass ? "PASS " : "FAIL ") << c.name << " [" << out.detail << "] "
              << std::fixed;
    std::cout.precision(2);
    std::cout << secs << "s (limit " << c.limit << "s)";
    if (!out.pass) {
      std::cout << " failures=" << out.failures << " first: " << out.first_failure;
    }
    std::cout << std::endl;
  }
  return all ? 0 : 1;
}
