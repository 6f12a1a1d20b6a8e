#include "nodal/paths.hpp"

#include "nodal/error.hpp"

#include <deque>
#include <map>

namespace nodal {

std::vector<std::size_t> PathSystem::path_edges(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t v = i; parent[v].has_value(); v = parent[v]->parent) {
    out.push_back(parent[v]->edge);
  }
  return out;
}

PathSystem build_path_system(const CurveGraph& c, std::size_t base_index) {
  const std::size_t gamma = c.num_components();
  const std::size_t delta = c.num_nodes();
  if (base_index >= gamma) {
    throw Error(Errc::unknown_vertex, "base component index " +
                                          std::to_string(base_index) +
                                          " is out of range");
  }
  PathSystem ps;
  ps.base = base_index;
  ps.representative.resize(delta);
  ps.marked.assign(delta, false);
  ps.tree_edge.assign(delta, false);
  ps.parent.assign(gamma, std::nullopt);
  ps.depth.assign(gamma, -1);
  ps.orientation.resize(delta);

  // Nodes are in ascending id order, so the first node seen in a class is the
  // lowest-id one.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> class_rep;
  // marked_between[u][v] = marked node joining u and v
  std::vector<std::map<std::size_t, std::size_t>> marked_between(gamma);
  for (std::size_t j = 0; j < delta; ++j) {
    const Node& n = c.node(j);
    const auto [it, fresh] = class_rep.emplace(std::pair{n.a, n.b}, j);
    ps.representative[j] = it->second;
    if (fresh) {
      ps.marked[j] = true;
      marked_between[n.a][n.b] = j;
      marked_between[n.b][n.a] = j;
    }
  }

  std::deque<std::size_t> queue{base_index};
  ps.depth[base_index] = 0;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (const auto& [v, edge] : marked_between[u]) {
      if (ps.depth[v] >= 0) continue;
      ps.depth[v] = ps.depth[u] + 1;
      queue.push_back(v);
    }
  }

  for (std::size_t v = 0; v < gamma; ++v) {
    if (v == base_index) continue;
    // Smallest-index neighbour one step closer; the map iterates in index
    // order.
    for (const auto& [u, edge] : marked_between[v]) {
      if (ps.depth[u] == ps.depth[v] - 1) {
        ps.parent[v] = TreeLink{u, edge};
        ps.tree_edge[edge] = true;
        break;
      }
    }
  }

  for (std::size_t j = 0; j < delta; ++j) {
    const std::size_t rep = ps.representative[j];
    const Node& n = c.node(rep);
    std::size_t first = n.a;
    std::size_t second = n.b;
    if (ps.tree_edge[rep]) {
      // the child is the endpoint whose parent link is this node
      if (!(ps.parent[n.a] && ps.parent[n.a]->edge == rep)) {
        std::swap(first, second);
      }
    } else if (ps.depth[n.b] > ps.depth[n.a]) {
      std::swap(first, second);
    }
    ps.orientation[j] = Orientation{first, second};
  }
  return ps;
}

void verify_path_system(const CurveGraph& c, const PathSystem& ps) {
  const auto fail = [](const std::string& why) {
    return Error(Errc::identity_violation, "path system: " + why);
  };
  const std::size_t gamma = c.num_components();

  std::map<std::pair<std::size_t, std::size_t>, int> reps_per_class;
  for (std::size_t j = 0; j < c.num_nodes(); ++j) {
    const Node& n = c.node(j);
    if (ps.marked[j]) ++reps_per_class[{n.a, n.b}];
    const Node& r = c.node(ps.representative[j]);
    if (r.a != n.a || r.b != n.b || !ps.marked[ps.representative[j]]) {
      throw fail("node " + std::to_string(n.id) + " has a bad representative");
    }
    if (ps.tree_edge[j] && !ps.marked[j]) {
      throw fail("tree edge outside the marking");
    }
    const Orientation& o = ps.orientation[j];
    const Orientation& ro = ps.orientation[ps.representative[j]];
    if (o.first != ro.first || o.second != ro.second) {
      throw fail("parallel nodes oriented inconsistently");
    }
  }
  for (const auto& [ends, count] : reps_per_class) {
    if (count != 1) throw fail("parallel class marked more than once");
  }

  // Distances in the marked graph.
  std::vector<std::int64_t> dist(gamma, -1);
  std::deque<std::size_t> queue{ps.base};
  dist[ps.base] = 0;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (const std::size_t j : c.incident_nodes(u)) {
      if (!ps.marked[j]) continue;
      const std::size_t v = c.node(j).other(u);
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }

  std::size_t tree_edges = 0;
  for (std::size_t j = 0; j < c.num_nodes(); ++j) tree_edges += ps.tree_edge[j];
  if (tree_edges + 1 != gamma) throw fail("tree edges do not span");
  if (ps.depth[ps.base] != 0 || ps.parent[ps.base]) {
    throw fail("base must have depth 0 and no parent");
  }
  for (std::size_t v = 0; v < gamma; ++v) {
    if (ps.depth[v] != dist[v]) throw fail("depth is not the BFS distance");
    if (v == ps.base) continue;
    if (!ps.parent[v]) throw fail("non-base component without parent");
    const TreeLink& link = *ps.parent[v];
    if (ps.depth[link.parent] + 1 != ps.depth[v]) {
      throw fail("parent depth is not one less");
    }
    const auto path = ps.path_edges(v);
    if (static_cast<std::int64_t>(path.size()) != dist[v]) {
      throw fail("tree path is not minimal");
    }
    // suffix closure: the path of the next vertex is the tail of this one
    const auto tail = ps.path_edges(link.parent);
    if (!std::equal(tail.begin(), tail.end(), path.begin() + 1)) {
      throw fail("paths are not suffix-closed");
    }
    const Orientation& o = ps.orientation[link.edge];
    if (o.first != v || o.second != link.parent) {
      throw fail("tree edge not oriented child before parent");
    }
  }
}

AjFamily aj_family(const CurveGraph& c, const Polarization& w,
                   const PathSystem& ps) {
  const std::size_t gamma = c.num_components();
  const auto lambda = lambda_vector(c, w);
  std::vector<std::uint64_t> members(c.num_nodes(), 0);
  for (std::size_t v = 0; v < gamma; ++v) {
    for (const std::size_t j : ps.path_edges(v)) {
      members[j] |= std::uint64_t{1} << v;
    }
  }
  AjFamily family;
  for (std::size_t j = 0; j < c.num_nodes(); ++j) {
    if (!ps.marked[j]) continue;
    AjEntry entry{j, Subcurve(members[j]), 0, std::nullopt};
    if (!entry.subcurve.empty()) {
      if (!c.is_connected(entry.subcurve) ||
          !c.is_connected(entry.subcurve.complement(gamma))) {
        throw Error(Errc::identity_violation,
                    "A_j or its complement is disconnected for node " +
                        std::to_string(c.node(j).id));
      }
      entry.boundary = c.boundary(entry.subcurve);
      entry.delta = delta_structure(c, lambda, entry.subcurve);
    }
    family.entries.push_back(std::move(entry));
  }
  return family;
}

std::vector<Star2Condition> star2_conditions(const AjFamily& family) {
  std::vector<Star2Condition> out;
  for (const AjEntry& entry : family.entries) {
    if (!entry.delta) continue;
    const Rational& d = *entry.delta;
    const bool ok = make_rational(entry.boundary - 1, 2) < d &&
                    d < make_rational(entry.boundary + 1, 2);
    out.push_back({entry.edge, ok});
  }
  return out;
}

bool all_star2_satisfied(const AjFamily& family) {
  for (const auto& cond : star2_conditions(family)) {
    if (!cond.satisfied) return false;
  }
  return true;
}

BranchResiduals branch_residuals(const CurveGraph& c, const PathSystem& ps,
                                 const SheafDatum& e) {
  BranchResiduals out;
  out.a.resize(c.num_nodes());
  out.b.resize(c.num_nodes());
  for (std::size_t j = 0; j < c.num_nodes(); ++j) {
    const Orientation& o = ps.orientation[j];
    out.a[j] = e.ranks[o.first] - e.stalk_free[j];
    out.b[j] = e.ranks[o.second] - e.stalk_free[j];
  }
  return out;
}

Rational delta_decomposed(const CurveGraph& c, const Polarization& w,
                          const PathSystem& ps, const AjFamily& family,
                          const SheafDatum& e) {
  check_dimension(c, w);
  const BranchResiduals ab = branch_residuals(c, ps, e);
  std::vector<const AjEntry*> by_edge(c.num_nodes(), nullptr);
  for (const AjEntry& entry : family.entries) by_edge[entry.edge] = &entry;

  Rational sum = 0;
  std::int64_t outside = 0;
  for (std::size_t j = 0; j < c.num_nodes(); ++j) {
    if (ps.tree_edge[j]) {
      const AjEntry& entry = *by_edge[j];
      const Rational& d = *entry.delta;
      sum += (make_rational(1 - entry.boundary, 2) + d) * ab.a[j];
      sum += (make_rational(1 + entry.boundary, 2) - d) * ab.b[j];
    } else {
      outside += ab.a[j] + ab.b[j];
    }
  }
  return sum + make_rational(outside, 2);
}

void verify_path_identities(const CurveGraph& c, const PathSystem& ps,
                            const SheafDatum& e) {
  const BranchResiduals ab = branch_residuals(c, ps, e);
  for (std::size_t j = 0; j < c.num_nodes(); ++j) {
    const std::size_t r = ps.representative[j];
    if (ab.b[j] - ab.a[j] != ab.b[r] - ab.a[r]) {
      throw Error(Errc::identity_violation,
                  "b - a differs between parallel nodes " +
                      std::to_string(c.node(j).id) + " and " +
                      std::to_string(c.node(r).id));
    }
  }
  for (std::size_t i = 0; i < c.num_components(); ++i) {
    std::int64_t sum = 0;
    for (const std::size_t j : ps.path_edges(i)) sum += ab.b[j] - ab.a[j];
    if (sum != e.ranks[ps.base] - e.ranks[i]) {
      throw Error(Errc::identity_violation,
                  "path telescoping fails for component " +
                      std::to_string(c.component(i).id) + ": sum " +
                      std::to_string(sum) + " vs r_base - r_i = " +
                      std::to_string(e.ranks[ps.base] - e.ranks[i]));
    }
  }
}

}  // namespace nodal
