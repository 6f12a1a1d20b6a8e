#include "nodal/sheaf.hpp"

#include "nodal/error.hpp"

#include <algorithm>

namespace nodal {

SheafDatum SheafDatum::structure_sheaf(const CurveGraph& c) {
  return SheafDatum{std::vector<std::int64_t>(c.num_components(), 1),
                    std::vector<std::int64_t>(c.num_components(), 0),
                    std::vector<std::int64_t>(c.num_nodes(), 1)};
}

SheafDatum SheafDatum::of_subcurve(const CurveGraph& c, Subcurve b) {
  SheafDatum e;
  e.ranks.resize(c.num_components());
  e.degrees.assign(c.num_components(), 0);
  for (std::size_t i = 0; i < c.num_components(); ++i) {
    e.ranks[i] = b.contains(i) ? 1 : 0;
  }
  e.stalk_free.resize(c.num_nodes());
  for (std::size_t j = 0; j < c.num_nodes(); ++j) {
    const Node& n = c.node(j);
    e.stalk_free[j] = (b.contains(n.a) && b.contains(n.b)) ? 1 : 0;
  }
  return e;
}

SheafDatum SheafDatum::with_maximal_free_part(const CurveGraph& c,
                                              std::vector<std::int64_t> ranks) {
  SheafDatum e;
  e.degrees.assign(ranks.size(), 0);
  e.stalk_free.resize(c.num_nodes());
  for (std::size_t j = 0; j < c.num_nodes(); ++j) {
    const Node& n = c.node(j);
    e.stalk_free[j] = std::min(ranks[n.a], ranks[n.b]);
  }
  e.ranks = std::move(ranks);
  return e;
}

void validate(const CurveGraph& c, const SheafDatum& e) {
  if (e.ranks.size() != c.num_components() ||
      e.degrees.size() != c.num_components()) {
    throw Error(Errc::dimension_mismatch,
                "ranks and degrees need one entry per component (" +
                    std::to_string(c.num_components()) + ")");
  }
  if (e.stalk_free.size() != c.num_nodes()) {
    throw Error(Errc::dimension_mismatch,
                "stalk_free needs one entry per node (" +
                    std::to_string(c.num_nodes()) + ")");
  }
  bool any_rank = false;
  for (std::size_t i = 0; i < e.ranks.size(); ++i) {
    const std::string where = "component " + std::to_string(c.component(i).id);
    if (e.ranks[i] < 0) {
      throw Error(Errc::invalid_sheaf, "negative rank on " + where);
    }
    if (e.ranks[i] == 0 && e.degrees[i] != 0) {
      throw Error(Errc::invalid_sheaf,
                  "nonzero degree on " + where + " where the rank is 0");
    }
    any_rank = any_rank || e.ranks[i] > 0;
  }
  if (!any_rank) throw Error(Errc::invalid_sheaf, "all ranks are zero");
  for (std::size_t j = 0; j < e.stalk_free.size(); ++j) {
    const Node& n = c.node(j);
    const std::string where = "node " + std::to_string(n.id);
    const std::int64_t s = e.stalk_free[j];
    if (s < 0) throw Error(Errc::invalid_sheaf, "negative s_j at " + where);
    if (s > e.ranks[n.a] || s > e.ranks[n.b]) {
      throw Error(Errc::invalid_sheaf,
                  "s_j = " + std::to_string(s) + " at " + where +
                      " exceeds min(r) = " +
                      std::to_string(std::min(e.ranks[n.a], e.ranks[n.b])));
    }
  }
}

Subcurve support(const SheafDatum& e) {
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < e.ranks.size(); ++i) {
    if (e.ranks[i] > 0) bits |= std::uint64_t{1} << i;
  }
  return Subcurve(bits);
}

std::vector<std::int64_t> residual_ranks(const CurveGraph& c,
                                         const SheafDatum& e) {
  std::vector<std::int64_t> t(c.num_nodes());
  for (std::size_t j = 0; j < c.num_nodes(); ++j) {
    const Node& n = c.node(j);
    t[j] = e.ranks[n.a] + e.ranks[n.b] - 2 * e.stalk_free[j];
  }
  return t;
}

bool is_locally_free(const CurveGraph& c, const SheafDatum& e) {
  if (std::any_of(e.ranks.begin(), e.ranks.end(),
                  [](std::int64_t r) { return r < 1; })) {
    return false;
  }
  const auto t = residual_ranks(c, e);
  return std::all_of(t.begin(), t.end(), [](std::int64_t x) { return x == 0; });
}

SlopeReport slope_report(const CurveGraph& c, const Polarization& w,
                         const SheafDatum& e) {
  check_dimension(c, w);
  SlopeReport out;
  out.wrank = 0;
  for (std::size_t i = 0; i < c.num_components(); ++i) {
    out.wrank += w[i] * e.ranks[i];
    out.chi += e.degrees[i] + e.ranks[i] * (1 - c.component(i).genus);
  }
  for (const std::int64_t s : e.stalk_free) out.chi -= s;
  out.wdeg = out.chi - out.wrank * c.euler_characteristic();
  if (out.wrank != 0) out.wslope = Rational(out.chi) / out.wrank;
  return out;
}

Rational delta_general(const CurveGraph& c, std::span<const Rational> lambda,
                       const SheafDatum& e) {
  Rational sum = 0;
  for (std::size_t i = 0; i < c.num_components(); ++i) {
    if (e.ranks[i] != 0) sum += lambda[i] * e.ranks[i];
  }
  std::int64_t free = 0;
  for (const std::int64_t s : e.stalk_free) free += s;
  return sum - free;
}

Rational delta_general(const CurveGraph& c, const Polarization& w,
                       const SheafDatum& e) {
  const auto lambda = lambda_vector(c, w);
  return delta_general(c, lambda, e);
}

Rational delta_residual(const CurveGraph& c, std::span<const Rational> lambda,
                        const SheafDatum& e) {
  Rational sum = 0;
  for (std::size_t i = 0; i < c.num_components(); ++i) {
    if (e.ranks[i] == 0) continue;
    sum += (lambda[i] - make_rational(c.valence(i), 2)) * e.ranks[i];
  }
  std::int64_t residual = 0;
  for (const std::int64_t t : residual_ranks(c, e)) residual += t;
  return sum + make_rational(residual, 2);
}

Rational delta_residual(const CurveGraph& c, const Polarization& w,
                        const SheafDatum& e) {
  const auto lambda = lambda_vector(c, w);
  return delta_residual(c, lambda, e);
}

RestrictionValues restrict_to(const CurveGraph& c, const Polarization& w,
                              const SheafDatum& e, Subcurve b) {
  if (b.empty()) throw Error(Errc::empty_subcurve, "subcurve is empty");
  const auto lambda = lambda_vector(c, w);
  RestrictionValues out;
  out.delta = 0;
  std::int64_t degrees = 0;
  for (const std::size_t i : b.members()) {
    out.delta += lambda[i] * e.ranks[i];
    degrees += e.degrees[i];
  }
  for (std::size_t j = 0; j < c.num_nodes(); ++j) {
    const Node& n = c.node(j);
    if (b.contains(n.a) && b.contains(n.b)) out.delta -= e.stalk_free[j];
  }
  out.wdeg = out.delta + degrees;
  return out;
}

SheafDatum tensor_by_multidegree(const SheafDatum& e,
                                 std::span<const std::int64_t> l) {
  if (l.size() != e.ranks.size()) {
    throw Error(Errc::dimension_mismatch,
                "multidegree length does not match the number of components");
  }
  SheafDatum out = e;
  for (std::size_t i = 0; i < l.size(); ++i) out.degrees[i] += e.ranks[i] * l[i];
  return out;
}

}  // namespace nodal
