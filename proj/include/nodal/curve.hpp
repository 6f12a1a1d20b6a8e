#pragma once

// Nodal curves with smooth components, modelled by their genus-decorated dual
// multigraph: one vertex per component, one edge per node.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nodal {

/// Upper bound on the number of components; subcurves are 64-bit masks.
inline constexpr std::size_t kMaxComponents = 62;

/// A union of components, stored as a bitmask over vertex indices
/// (bit i = the i-th component in ascending id order).
class Subcurve {
 public:
  constexpr Subcurve() = default;
  constexpr explicit Subcurve(std::uint64_t bits) : bits_(bits) {}

  static constexpr Subcurve single(std::size_t index) {
    return Subcurve(std::uint64_t{1} << index);
  }
  static constexpr Subcurve whole(std::size_t gamma) {
    return Subcurve(gamma >= 64 ? ~std::uint64_t{0}
                                : (std::uint64_t{1} << gamma) - 1);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(std::size_t index) const {
    return (bits_ >> index) & 1U;
  }
  constexpr std::size_t size() const {
    return static_cast<std::size_t>(std::popcount(bits_));
  }
  constexpr Subcurve complement(std::size_t gamma) const {
    return Subcurve(whole(gamma).bits_ & ~bits_);
  }

  std::vector<std::size_t> members() const;

  constexpr auto operator<=>(const Subcurve&) const = default;

 private:
  std::uint64_t bits_ = 0;
};

struct Component {
  std::int64_t id;
  std::int64_t genus;
};

/// A node joining components `a` and `b` (vertex indices, a < b).
struct Node {
  std::int64_t id;
  std::size_t a;
  std::size_t b;

  std::size_t other(std::size_t end) const { return end == a ? b : a; }
};

struct CurveClass {
  bool compact_type = false;
  bool stable = false;
  bool semistable = false;
  bool quasistable = false;
  bool cycle_of_rationals = false;
};

/// Connected loopless multigraph with genus-decorated vertices.
/// Immutable once constructed; vertices and edges are kept in ascending id
/// order and addressed by index elsewhere in the library.
class CurveGraph {
 public:
  struct VertexSpec {
    std::int64_t id;
    std::int64_t genus;
  };
  struct EdgeSpec {
    std::int64_t id;
    std::int64_t end1;
    std::int64_t end2;
  };

  /// Throws Error{Errc::invalid_curve} on duplicate or non-positive ids,
  /// negative genus, unknown endpoints, loops, disconnection, or more than
  /// kMaxComponents vertices.
  CurveGraph(std::vector<VertexSpec> vertices, std::vector<EdgeSpec> edges);

  /// Convenience for tests and generators: components get ids 1..n and nodes
  /// ids 1..m, endpoints given as 0-based indices.
  static CurveGraph from_indices(
      const std::vector<std::int64_t>& genera,
      const std::vector<std::pair<std::size_t, std::size_t>>& ends);

  std::size_t num_components() const { return components_.size(); }
  std::size_t num_nodes() const { return nodes_.size(); }
  const std::vector<Component>& components() const { return components_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Component& component(std::size_t i) const { return components_[i]; }
  const Node& node(std::size_t j) const { return nodes_[j]; }

  std::optional<std::size_t> index_of_component(std::int64_t id) const;
  std::optional<std::size_t> index_of_node(std::int64_t id) const;

  /// Number of nodes lying on component i (delta_i).
  std::int64_t valence(std::size_t i) const { return valence_[i]; }
  /// Mask of components sharing at least one node with component i.
  std::uint64_t neighbours(std::size_t i) const { return neighbours_[i]; }
  /// Indices of nodes incident to component i, ascending.
  const std::vector<std::size_t>& incident_nodes(std::size_t i) const {
    return incident_[i];
  }

  std::int64_t total_genus() const;
  /// p_a(C) = sum g_i + delta - gamma + 1.
  std::int64_t arithmetic_genus() const;
  /// chi(O_C) = 1 - p_a(C).
  std::int64_t euler_characteristic() const { return 1 - arithmetic_genus(); }
  /// First Betti number of the dual graph.
  std::int64_t betti_number() const;

  Subcurve all() const { return Subcurve::whole(num_components()); }

  bool is_connected(Subcurve b) const;
  /// N(B): nodes with both ends in B.
  std::int64_t internal_nodes(Subcurve b) const;
  /// delta_B: nodes with exactly one end in B.
  std::int64_t boundary(Subcurve b) const;
  /// p_a(B) = 1 - chi(O_B); valid for disconnected B, where chi is summed
  /// over the connected pieces. Throws Errc::empty_subcurve.
  std::int64_t genus(Subcurve b) const;

  bool operator==(const CurveGraph& other) const;

 private:
  void index();

  std::vector<Component> components_;
  std::vector<Node> nodes_;
  std::vector<std::int64_t> valence_;
  std::vector<std::uint64_t> neighbours_;
  std::vector<std::vector<std::size_t>> incident_;
};

CurveClass classify(const CurveGraph& c);

/// Genus-0 components meeting the rest of the curve in exactly two nodes.
Subcurve exceptional_components(const CurveGraph& c);

/// Calls `visit` on every non-empty proper subcurve whose induced subgraph is
/// connected, in ascending bitmask order.
void for_each_proper_connected_subcurve(
    const CurveGraph& c, const std::function<void(Subcurve)>& visit);

std::vector<Subcurve> enumerate_proper_connected_subcurves(const CurveGraph& c);

/// Graphviz description with labels "C_i (g=g_i)" and "p_j"; deterministic.
std::string export_dot(const CurveGraph& c);

}  // namespace nodal
