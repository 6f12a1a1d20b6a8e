#include "nodal/polarization.hpp"

#include "nodal/error.hpp"

#include <numeric>

namespace nodal {

Polarization::Polarization(std::vector<Rational> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) {
    throw Error(Errc::invalid_polarization, "polarization has no weights");
  }
  Rational sum = 0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const Rational& w = weights_[i];
    if (w <= 0 || (weights_.size() > 1 && w >= 1)) {
      throw Error(Errc::invalid_polarization,
                  "weight " + std::to_string(i + 1) + " = " +
                      format_rational(w) + " is outside (0, 1)");
    }
    sum += w;
  }
  if (sum != 1) {
    throw Error(Errc::invalid_polarization,
                "weights sum to " + format_rational(sum) + ", not 1");
  }
}

Rational Polarization::weight_of(Subcurve b) const {
  Rational sum = 0;
  for (const std::size_t i : b.members()) sum += weights_[i];
  return sum;
}

void check_dimension(const CurveGraph& c, const Polarization& w) {
  if (w.size() != c.num_components()) {
    throw Error(Errc::dimension_mismatch,
                "polarization has " + std::to_string(w.size()) +
                    " weights but the curve has " +
                    std::to_string(c.num_components()) + " components");
  }
}

Polarization from_multidegree(const CurveGraph& c,
                              std::span<const std::int64_t> degrees) {
  if (degrees.size() != c.num_components()) {
    throw Error(Errc::dimension_mismatch,
                "multidegree length does not match the number of components");
  }
  std::int64_t total = 0;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] <= 0) {
      throw Error(Errc::non_ample_multidegree,
                  "degree on component " +
                      std::to_string(c.component(i).id) +
                      " is not positive; the line bundle is not ample");
    }
    total += degrees[i];
  }
  std::vector<Rational> w;
  w.reserve(degrees.size());
  for (const std::int64_t d : degrees) w.push_back(make_rational(d, total));
  return Polarization(std::move(w));
}

Polarization canonical_polarization(const CurveGraph& c) {
  if (!classify(c).stable) {
    throw Error(Errc::canonical_undefined,
                "canonical polarization needs a stable curve (p_a >= 2 and "
                "every rational component meeting the rest in >= 3 nodes)");
  }
  const std::int64_t pa = c.arithmetic_genus();
  std::vector<Rational> eta;
  eta.reserve(c.num_components());
  for (std::size_t i = 0; i < c.num_components(); ++i) {
    // (g_i - 1 + delta_i/2) / (p_a - 1) = (2g_i - 2 + delta_i) / (2p_a - 2)
    eta.push_back(make_rational(2 * c.component(i).genus - 2 + c.valence(i),
                                2 * pa - 2));
  }
  return Polarization(std::move(eta));
}

std::vector<Rational> lambda_vector(const CurveGraph& c,
                                    const Polarization& w) {
  check_dimension(c, w);
  const std::int64_t chi = c.euler_characteristic();
  std::vector<Rational> lambda;
  lambda.reserve(c.num_components());
  Rational sum = 0;
  for (std::size_t i = 0; i < c.num_components(); ++i) {
    lambda.push_back(1 - c.component(i).genus - w[i] * chi);
    sum += lambda.back();
  }
  if (sum != static_cast<std::int64_t>(c.num_nodes())) {
    throw Error(Errc::identity_violation,
                "sum of lambda_i is " + format_rational(sum) + ", expected " +
                    std::to_string(c.num_nodes()));
  }
  return lambda;
}

Rational delta_structure(const CurveGraph& c, std::span<const Rational> lambda,
                         Subcurve b) {
  if (b.empty()) throw Error(Errc::empty_subcurve, "subcurve is empty");
  Rational sum = 0;
  for (const std::size_t i : b.members()) sum += lambda[i];
  return sum - c.internal_nodes(b);
}

Rational delta_structure(const CurveGraph& c, const Polarization& w,
                         Subcurve b) {
  const auto lambda = lambda_vector(c, w);
  return delta_structure(c, lambda, b);
}

bool StabilityPolytope::contains(const Polarization& w) const {
  for (const auto& ineq : inequalities) {
    const Rational x = w.weight_of(ineq.subcurve);
    if (!(ineq.lower < x && x < ineq.upper)) return false;
  }
  return true;
}

void for_each_grid_polarization(
    std::size_t gamma, std::int64_t max_denominator,
    const std::function<bool(const std::vector<std::int64_t>&, std::int64_t)>&
        visit) {
  if (gamma == 0) return;
  std::vector<std::int64_t> parts(gamma);
  for (std::int64_t q = static_cast<std::int64_t>(gamma); q <= max_denominator;
       ++q) {
    // Lexicographic walk over compositions of q into gamma positive parts.
    std::fill(parts.begin(), parts.end(), 1);
    parts.back() = q - static_cast<std::int64_t>(gamma) + 1;
    while (true) {
      std::int64_t g = q;
      for (const std::int64_t p : parts) g = std::gcd(g, p);
      if (g == 1 && !visit(parts, q)) return;
      // Next composition: bump the rightmost part whose tail has slack.
      std::int64_t tail = parts.back();
      std::ptrdiff_t k = static_cast<std::ptrdiff_t>(gamma) - 2;
      while (k >= 0 &&
             tail <= static_cast<std::int64_t>(gamma) - 1 - k) {
        tail += parts[static_cast<std::size_t>(k)];
        --k;
      }
      if (k < 0) break;
      ++parts[static_cast<std::size_t>(k)];
      --tail;
      for (std::size_t t = static_cast<std::size_t>(k) + 1; t + 1 < gamma; ++t) {
        parts[t] = 1;
      }
      parts.back() = tail - (static_cast<std::int64_t>(gamma) - 2 - k);
    }
  }
}

StabilityPolytope stability_polytope(const CurveGraph& c,
                                     std::int64_t max_denominator) {
  const std::int64_t pa = c.arithmetic_genus();
  if (pa <= 1) {
    throw Error(Errc::unsupported,
                "the weight polytope is only defined for p_a >= 2; for p_a <= 1 "
                "stability of O_C does not depend on the polarization");
  }
  const std::size_t gamma = c.num_components();
  const std::uint64_t top = std::uint64_t{1} << (gamma - 1);
  StabilityPolytope out;
  for_each_proper_connected_subcurve(c, [&](Subcurve b) {
    // B and its complement give the same window; keep the member without the
    // last component whenever the complement is itself connected.
    if ((b.bits() & top) != 0 && c.is_connected(b.complement(gamma))) return;
    const std::int64_t pb = c.genus(b);
    const std::int64_t db = c.boundary(b);
    out.inequalities.push_back(
        {b, make_rational(pb - 1, pa - 1), make_rational(pb - 1 + db, pa - 1)});
  });

  if (classify(c).stable) {
    Polarization eta = canonical_polarization(c);
    if (out.contains(eta)) {
      out.witness = std::move(eta);
      return out;
    }
  }
  for_each_grid_polarization(
      gamma, max_denominator,
      [&](const std::vector<std::int64_t>& num, std::int64_t q) {
        std::vector<Rational> w;
        w.reserve(num.size());
        for (const std::int64_t n : num) w.push_back(make_rational(n, q));
        Polarization candidate(std::move(w));
        if (out.contains(candidate)) {
          out.witness = std::move(candidate);
          return false;
        }
        return true;
      });
  return out;
}

}  // namespace nodal
