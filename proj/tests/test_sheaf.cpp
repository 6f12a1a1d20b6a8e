#include "curves.hpp"
#include "doctest.h"
#include "nodal/error.hpp"
#include "nodal/sheaf.hpp"
#include "oracle.hpp"

#include <numeric>

using namespace nodal;
using fixtures::weights;

namespace {

SheafDatum datum(std::vector<std::int64_t> r, std::vector<std::int64_t> s,
                 std::vector<std::int64_t> d = {}) {
  if (d.empty()) d.assign(r.size(), 0);
  return SheafDatum{std::move(r), std::move(d), std::move(s)};
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::parse_error;
}

}  // namespace

TEST_CASE("validation") {
  const CurveGraph c = fixtures::two_genus2();
  CHECK_NOTHROW(validate(c, datum({1, 1}, {1})));
  CHECK_NOTHROW(validate(c, datum({1, 1}, {0})));
  CHECK(code_of([&] { validate(c, datum({1, 0}, {1})); }) == Errc::invalid_sheaf);
  CHECK(code_of([&] { validate(c, datum({0, 0}, {0})); }) == Errc::invalid_sheaf);
  CHECK(code_of([&] { validate(c, datum({-1, 1}, {0})); }) == Errc::invalid_sheaf);
  CHECK(code_of([&] { validate(c, datum({1, 1}, {-1})); }) == Errc::invalid_sheaf);
  CHECK(code_of([&] { validate(c, datum({1, 0}, {0}, {0, 2})); }) == Errc::invalid_sheaf);
  CHECK(code_of([&] { validate(c, datum({1, 1, 1}, {0})); }) == Errc::dimension_mismatch);
  CHECK(code_of([&] { validate(c, datum({1, 1}, {0, 0})); }) == Errc::dimension_mismatch);
  try {
    validate(c, datum({1, 0}, {1}));
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("node 1") != std::string::npos);
  }
  // disconnected support is allowed
  CHECK_NOTHROW(validate(fixtures::chain({1, 0, 1}), datum({1, 0, 1}, {0, 0})));
  CHECK(support(datum({1, 0, 1}, {0, 0})).bits() == 0b101);
}

TEST_CASE("local freeness") {
  CHECK(is_locally_free(fixtures::two_genus2(), datum({1, 1}, {1})));
  CHECK_FALSE(is_locally_free(fixtures::two_genus2(), datum({1, 1}, {0})));
  CHECK(is_locally_free(fixtures::triangle(), datum({2, 2, 2}, {2, 2, 2})));
  CHECK_FALSE(is_locally_free(fixtures::two_genus2(), datum({1, 0}, {0})));
}

TEST_CASE("slope report examples") {
  const CurveGraph c = fixtures::two_genus2();
  const Polarization w = weights({"1/6", "5/6"});
  const SlopeReport oc = slope_report(c, w, SheafDatum::structure_sheaf(c));
  CHECK(oc.wdeg == 0);
  CHECK(oc.wrank == 1);
  REQUIRE(oc.wslope.has_value());
  CHECK(*oc.wslope == c.euler_characteristic());
  const SlopeReport r = slope_report(c, w, datum({1, 0}, {0}));
  CHECK(r.wdeg == make_rational(-1, 2));
  CHECK(r.wrank == make_rational(1, 6));

  const SheafDatum e = datum({2, 3}, {1}, {1, -2});
  const std::vector<std::int64_t> l{4, -1};
  const SlopeReport before = slope_report(c, w, e);
  const SlopeReport after = slope_report(c, w, tensor_by_multidegree(e, l));
  CHECK(after.chi == before.chi + 2 * 4 + 3 * -1);
  CHECK(after.wdeg == before.wdeg + 5);
}

TEST_CASE("Delta examples") {
  const CurveGraph c = fixtures::two_genus2();
  const Polarization w = weights({"1/6", "5/6"});
  CHECK(delta_general(c, w, SheafDatum::structure_sheaf(c)) == 0);
  CHECK(delta_general(c, w, datum({1, 0}, {0})) == make_rational(-1, 2));
  CHECK(delta_general(c, w, datum({1, 1}, {0})) == 1);
  CHECK(delta_residual(c, w, datum({1, 1}, {0})) == 1);
  CHECK(delta_residual(c, w, datum({1, 0}, {0})) == make_rational(-1, 2));
  // equal ranks: half the residual ranks
  const SheafDatum eq = datum({2, 2}, {0});
  CHECK(delta_residual(c, w, eq) == 2);
}

TEST_CASE("restriction and tensor examples") {
  const CurveGraph c = fixtures::triangle();
  const Polarization w = weights({"1/3", "1/6", "1/2"});
  const SheafDatum e = datum({2, 1, 3}, {1, 2, 0}, {5, -1, 0});
  CHECK(restrict_to(c, w, e, c.all()).delta == delta_general(c, w, e));
  CHECK(restrict_to(c, w, e, c.all()).wdeg == delta_general(c, w, e) + 4);
  CHECK(code_of([&] { (void)restrict_to(c, w, e, Subcurve()); }) == Errc::empty_subcurve);

  const std::vector<std::int64_t> zero{0, 0, 0};
  CHECK(tensor_by_multidegree(e, zero) == e);
  const CurveGraph two = fixtures::two_genus2();
  const SheafDatum r23 = datum({2, 3}, {2});
  const std::vector<std::int64_t> ones{1, 1};
  CHECK(tensor_by_multidegree(r23, ones).degrees == std::vector<std::int64_t>{2, 3});
  const std::vector<std::int64_t> bad{1};
  CHECK(code_of([&] { (void)tensor_by_multidegree(r23, bad); }) == Errc::dimension_mismatch);
}

TEST_CASE("random data: formula agreement and identities") {
  oracle::Gen gen(29);
  for (int trial = 0; trial < 1500; ++trial) {
    const CurveGraph c = oracle::random_curve(gen, 6, 6, 3);
    const std::size_t n = c.num_components();
    const Polarization w = oracle::random_polarization(gen, n, 15);
    const SheafDatum e = oracle::random_datum(gen, c, 4);
    REQUIRE_NOTHROW(validate(c, e));
    const Rational dg = delta_general(c, w, e);
    CHECK(dg == oracle::delta(c, w, e));
    CHECK(dg == delta_residual(c, w, e));

    const SlopeReport slope = slope_report(c, w, e);
    const std::int64_t dsum = std::accumulate(e.degrees.begin(), e.degrees.end(), std::int64_t{0});
    CHECK(slope.wdeg - dsum == dg);
    if (slope.wslope) CHECK(*slope.wslope * slope.wrank == slope.chi);

    std::vector<std::int64_t> l(n);
    for (auto& x : l) x = gen.range(-5, 5);
    CHECK(delta_general(c, w, tensor_by_multidegree(e, l)) == dg);

    if (n >= 2) {
      const Subcurve b(static_cast<std::uint64_t>(gen.range(1, static_cast<std::int64_t>(c.all().bits()) - 1)));
      std::int64_t boundary_s = 0;
      for (std::size_t j = 0; j < c.num_nodes(); ++j) {
        if (b.contains(c.node(j).a) != b.contains(c.node(j).b)) boundary_s += e.stalk_free[j];
      }
      CHECK(restrict_to(c, w, e, b).delta + restrict_to(c, w, e, b.complement(n)).delta - dg ==
            boundary_s);
    }

    // locally free: zero, and restriction is r * Delta(O_B)
    const std::int64_t r = gen.range(1, 4);
    const SheafDatum lf{std::vector<std::int64_t>(n, r), std::vector<std::int64_t>(n, 0),
                        std::vector<std::int64_t>(c.num_nodes(), r)};
    CHECK(is_locally_free(c, lf));
    CHECK(delta_general(c, w, lf) == 0);
    for (std::uint64_t m = 1; m < c.all().bits(); ++m) {
      CHECK(restrict_to(c, w, lf, Subcurve(m)).delta == r * oracle::delta_O(c, w, m));
    }

    // equal ranks: half the residual ranks, zero exactly when locally free
    SheafDatum eq = lf;
    for (auto& s : eq.stalk_free) s = gen.range(0, r);
    const auto t = residual_ranks(c, eq);
    const Rational de = delta_general(c, w, eq);
    CHECK(de == make_rational(std::accumulate(t.begin(), t.end(), std::int64_t{0}), 2));
    CHECK(de >= 0);
    CHECK((de == 0) == is_locally_free(c, eq));

    // additivity over the pieces of the support
    Rational total = 0;
    for (const std::uint64_t piece : oracle::pieces(c, support(e).bits())) {
      SheafDatum part = e;
      for (std::size_t i = 0; i < n; ++i) {
        if (!oracle::in(piece, i)) part.ranks[i] = part.degrees[i] = 0;
      }
      for (std::size_t j = 0; j < c.num_nodes(); ++j) {
        if (!(oracle::in(piece, c.node(j).a) && oracle::in(piece, c.node(j).b))) {
          part.stalk_free[j] = 0;
        }
      }
      total += delta_general(c, w, part);
    }
    CHECK(total == dg);
  }
}
