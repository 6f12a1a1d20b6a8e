#pragma once

// Rooted minimal-path machinery on the dual graph.
//
// A marking keeps one node out of every class of parallel nodes. Breadth-first
// search on the marked (simple) graph from a base component gives each
// component a minimal path to the base; the paths are closed under taking
// suffixes because they are read off a parent-pointer tree. Every node is
// oriented: along tree paths the component farther from the base precedes.
// For a marked node j, A_j is the set of components whose path uses j.

#include "nodal/curve.hpp"
#include "nodal/polarization.hpp"
#include "nodal/rational.hpp"
#include "nodal/sheaf.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace nodal {

/// `first` precedes `second` (vertex indices).
struct Orientation {
  std::size_t first;
  std::size_t second;
};

struct TreeLink {
  std::size_t parent;  // vertex index
  std::size_t edge;    // node index of the marked tree edge
};

struct PathSystem {
  std::size_t base = 0;
  /// Per node: index of the marked representative of its parallel class.
  std::vector<std::size_t> representative;
  /// Per node: true iff the node is the representative (in M).
  std::vector<bool> marked;
  /// Per node: true iff the node lies on some minimal path (in M').
  std::vector<bool> tree_edge;
  /// Per vertex: link towards the base; empty for the base.
  std::vector<std::optional<TreeLink>> parent;
  std::vector<std::int64_t> depth;
  /// Per node.
  std::vector<Orientation> orientation;

  /// Node indices of the path from component i to the base, in order.
  std::vector<std::size_t> path_edges(std::size_t i) const;
};

/// Throws Errc::unknown_vertex if `base_index` is out of range.
PathSystem build_path_system(const CurveGraph& c, std::size_t base_index);

struct AjEntry {
  std::size_t edge;                // marked node index
  Subcurve subcurve;               // A_j; empty iff edge not in M'
  std::int64_t boundary = 0;       // delta_{A_j} in the full multigraph
  std::optional<Rational> delta;   // Delta_w(O_{A_j}) when A_j is non-empty
};

struct AjFamily {
  std::vector<AjEntry> entries;  // one per marked node, ascending node index
};

/// Throws identity_violation if a non-empty A_j or its complement is
/// disconnected.
AjFamily aj_family(const CurveGraph& c, const Polarization& w,
                   const PathSystem& ps);

struct Star2Condition {
  std::size_t edge;
  bool satisfied;
};

/// (delta_A - 1)/2 < Delta_w(O_A) < (delta_A + 1)/2 for each non-empty A_j.
std::vector<Star2Condition> star2_conditions(const AjFamily& family);

bool all_star2_satisfied(const AjFamily& family);

/// Per node: a_j, b_j are the residual parts on the preceding and following
/// branch, a_j = r_first - s_j, b_j = r_second - s_j.
struct BranchResiduals {
  std::vector<std::int64_t> a;
  std::vector<std::int64_t> b;
};

BranchResiduals branch_residuals(const CurveGraph& c, const PathSystem& ps,
                                 const SheafDatum& e);

/// Delta_w(E) assembled from the A_j family:
///   sum_{j in M'} [a_j((1-delta_A)/2 + Delta(O_A)) + b_j((1+delta_A)/2 -
///   Delta(O_A))] + (1/2) sum_{j not in M'} (a_j + b_j).
Rational delta_decomposed(const CurveGraph& c, const Polarization& w,
                          const PathSystem& ps, const AjFamily& family,
                          const SheafDatum& e);

/// Checks (a) b_j - a_j is constant on each parallel class and (b) the sum of
/// b_j - a_j along the path of i equals r_base - r_i. Throws
/// identity_violation naming the offending indices.
void verify_path_identities(const CurveGraph& c, const PathSystem& ps,
                            const SheafDatum& e);

/// Structural checks: one representative per class, depths consistent,
/// tree paths minimal in the marked graph, suffix closure, consistent
/// orientation on parallel nodes. Throws identity_violation.
void verify_path_system(const CurveGraph& c, const PathSystem& ps);

}  // namespace nodal
