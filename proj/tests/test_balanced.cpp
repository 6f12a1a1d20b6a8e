#include "curves.hpp"
#include "doctest.h"
#include "nodal/balanced.hpp"
#include "nodal/error.hpp"
#include "nodal/search.hpp"
#include "nodal/stability.hpp"
#include "oracle.hpp"

using namespace nodal;

namespace {

// Every multidegree with entries in [1, top].
template <class F>
void each_ample(std::size_t gamma, std::int64_t top, F&& f) {
  MultidegreeBundle l{std::vector<std::int64_t>(gamma, 1)};
  while (true) {
    f(l);
    std::size_t k = 0;
    while (k < gamma && l.degrees[k] == top) l.degrees[k++] = 1;
    if (k == gamma) return;
    ++l.degrees[k];
  }
}

// Positive compositions of `total` into `gamma` parts.
template <class F>
void each_composition(std::size_t gamma, std::int64_t total, F&& f) {
  each_ample(gamma, total, [&](const MultidegreeBundle& l) {
    if (l.total() == total) f(l);
  });
}

std::vector<std::int64_t> omega_multidegree(const CurveGraph& c) {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < c.num_components(); ++i) {
    out.push_back(omega_degree(c, Subcurve::single(i)));
  }
  return out;
}

}  // namespace

TEST_CASE("omega degrees add up to 2 p_a - 2") {
  oracle::Gen gen(111);
  for (int trial = 0; trial < 200; ++trial) {
    const CurveGraph c = oracle::random_curve(gen, 6, 4, 2);
    std::int64_t sum = 0;
    for (const auto d : omega_multidegree(c)) sum += d;
    CHECK(sum == 2 * oracle::pa(c) - 2);
    CHECK(omega_degree(c, c.all()) == 2 * oracle::pa(c) - 2);
  }
}

TEST_CASE("balanced examples") {
  const CurveGraph two = fixtures::banana(2, 1, 1);
  const BalanceReport r = check_balanced(two, {{1, 1}});
  CHECK(r.balanced);
  CHECK(r.strictly_balanced);
  CHECK(r.violations.empty());

  const CurveGraph g22 = fixtures::two_genus2();
  CHECK(is_strictly_balanced(g22, {omega_multidegree(g22)}));
  CHECK_FALSE(is_balanced(g22, {{3, 0}}));

  // genus-1 chain with a rational bridge: the middle component is exceptional
  const CurveGraph qs = fixtures::chain({1, 0, 1});
  REQUIRE(classify(qs).quasistable);
  REQUIRE_FALSE(classify(qs).stable);
  const BalanceReport bad = check_balanced(qs, {{1, 2, 1}});
  CHECK_FALSE(bad.balanced);
  CHECK(bad.bad_exceptional == std::vector<std::size_t>{1});
  // deg_E = 1 with equality on subcurves cut by exceptional nodes only
  const BalanceReport ok = check_balanced(qs, {{1, 1, 1}});
  CHECK(ok.balanced);
  CHECK(ok.strictly_balanced);

  CHECK_THROWS_AS(check_balanced(two, {{1, 1, 1}}), Error);
  try {
    check_balanced(fixtures::elliptic_tail(), {{1, 1}});
    FAIL("expected unsupported");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unsupported);
  }
}

TEST_CASE("balanced report against a direct subset scan") {
  oracle::Gen gen(113);
  int balanced_seen = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const CurveGraph c = oracle::random_curve(gen, 4, 4, 2);
    if (oracle::pa(c) < 2 || !classify(c).quasistable) continue;
    const std::size_t n = c.num_components();
    MultidegreeBundle l;
    for (std::size_t i = 0; i < n; ++i) l.degrees.push_back(gen.range(-1, 4));
    const std::int64_t d = l.total();
    const std::int64_t pa = oracle::pa(c);
    bool balanced = true;
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    for (std::uint64_t m = 1; m < full; ++m) {
      std::int64_t deg = 0;
      std::int64_t g = 0;
      for (std::size_t i = 0; i < n; ++i) deg += oracle::in(m, i) ? l.degrees[i] : 0;
      g = oracle::genus(c, m);
      const std::int64_t omega = 2 * g - 2 + oracle::boundary(c, m);
      // |2(2pa-2) deg - 2 d omega| <= (2pa-2) delta_B, all integers
      const std::int64_t lhs = std::abs(2 * (2 * pa - 2) * deg - 2 * d * omega);
      if (lhs > (2 * pa - 2) * oracle::boundary(c, m)) balanced = false;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const bool exceptional = c.component(i).genus == 0 && oracle::boundary(c, std::uint64_t{1} << i) == 2;
      if (exceptional && l.degrees[i] != 1) balanced = false;
    }
    const BalanceReport r = check_balanced(c, l);
    CHECK(r.balanced == balanced);
    if (r.strictly_balanced) CHECK(r.balanced);
    balanced_seen += balanced;
  }
  CHECK(balanced_seen > 5);
}

TEST_CASE("balanced with large degree gives stable O_C") {
  oracle::Gen gen(127);
  int hits = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const CurveGraph c = oracle::random_curve(gen, 4, 4, 2);
    if (oracle::pa(c) < 2 || !classify(c).quasistable) continue;
    each_ample(c.num_components(), 5, [&](const MultidegreeBundle& l) {
      if (l.total() <= oracle::pa(c) - 1 || !is_balanced(c, l)) return;
      const Polarization w = from_multidegree(c, l.degrees);
      CHECK(oc_stability(c, w).stable);
      ++hits;
    });
  }
  CHECK(hits > 50);
}

TEST_CASE("stable O_C with small degree forces a stable curve and strict balance") {
  oracle::Gen gen(131);
  int hits = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const CurveGraph c = oracle::random_curve(gen, 4, 4, 2);
    if (c.num_components() < 2 || oracle::pa(c) < 2 || !classify(c).quasistable) continue;
    each_ample(c.num_components(), 4, [&](const MultidegreeBundle& l) {
      if (l.total() > oracle::pa(c) - 1) return;
      const Polarization w = from_multidegree(c, l.degrees);
      if (!oc_stability(c, w).stable) return;
      CHECK(classify(c).stable);
      CHECK(is_strictly_balanced(c, l));
      ++hits;
    });
  }
  CHECK(hits > 20);
}

TEST_CASE("degree p_a - 1: strict balance matches stability, exhaustively") {
  CampaignConfig cfg;
  cfg.max_vertices = 4;
  cfg.max_edges = 5;
  cfg.max_genus = 2;
  cfg.filter = CurveFilter::stable;
  int applicable = 0;
  int compact = 0;
  for (const CurveGraph& c : enumerate_curves(cfg)) {
    const std::int64_t pa = c.arithmetic_genus();
    if (pa - 1 < static_cast<std::int64_t>(c.num_components())) continue;
    each_composition(c.num_components(), pa - 1, [&](const MultidegreeBundle& l) {
      const BridgeReport r = balanced_stability_bridge(c, l);
      REQUIRE(r.applicable);
      CHECK(r.consistent);
      CHECK(r.strictly_balanced == oracle::oc_stable(c, from_multidegree(c, l.degrees)));
      if (r.goodness) {
        ++compact;
        CHECK((*r.goodness == GoodnessStatus::good_certified) == r.strictly_balanced);
      }
      ++applicable;
    });
  }
  CHECK(applicable > 100);
  CHECK(compact > 10);
}

TEST_CASE("bridge applicability") {
  const CurveGraph c = fixtures::two_genus2();
  CHECK_FALSE(balanced_stability_bridge(c, {{1, 1, 1}}).applicable);
  CHECK_FALSE(balanced_stability_bridge(c, {{0, 3}}).applicable);
  CHECK_FALSE(balanced_stability_bridge(c, {{2, 2}}).applicable);
  CHECK_FALSE(balanced_stability_bridge(fixtures::chain({1, 0, 1}), {{1, 1, 1}}).applicable);
  const BridgeReport r = balanced_stability_bridge(c, {{1, 2}});
  CHECK(r.applicable);
  CHECK(r.consistent);
  CHECK(r.goodness.has_value());
}
