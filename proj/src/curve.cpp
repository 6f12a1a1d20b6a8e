#include "nodal/curve.hpp"

#include "nodal/error.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace nodal {

std::vector<std::size_t> Subcurve::members() const {
  std::vector<std::size_t> out;
  out.reserve(size());
  for (std::uint64_t rest = bits_; rest != 0; rest &= rest - 1) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(rest)));
  }
  return out;
}

CurveGraph::CurveGraph(std::vector<VertexSpec> vertices,
                       std::vector<EdgeSpec> edges) {
  const auto fail = [](const std::string& why) {
    return Error(Errc::invalid_curve, why);
  };
  if (vertices.empty()) throw fail("a curve needs at least one component");
  if (vertices.size() > kMaxComponents) {
    throw fail("at most " + std::to_string(kMaxComponents) +
               " components are supported");
  }
  std::sort(vertices.begin(), vertices.end(),
            [](const VertexSpec& x, const VertexSpec& y) { return x.id < y.id; });
  std::sort(edges.begin(), edges.end(),
            [](const EdgeSpec& x, const EdgeSpec& y) { return x.id < y.id; });

  std::unordered_map<std::int64_t, std::size_t> vertex_index;
  for (const auto& v : vertices) {
    if (v.id <= 0) {
      throw fail("component id " + std::to_string(v.id) + " is not positive");
    }
    if (v.genus < 0) {
      throw fail("component " + std::to_string(v.id) + " has negative genus");
    }
    if (!vertex_index.emplace(v.id, components_.size()).second) {
      throw fail("duplicate component id " + std::to_string(v.id));
    }
    components_.push_back({v.id, v.genus});
  }

  std::unordered_set<std::int64_t> edge_ids;
  for (const auto& e : edges) {
    if (e.id <= 0) {
      throw fail("node id " + std::to_string(e.id) + " is not positive");
    }
    if (!edge_ids.insert(e.id).second) {
      throw fail("duplicate node id " + std::to_string(e.id));
    }
    const auto a = vertex_index.find(e.end1);
    const auto b = vertex_index.find(e.end2);
    if (a == vertex_index.end() || b == vertex_index.end()) {
      throw fail("node " + std::to_string(e.id) +
                 " references an unknown component");
    }
    if (a->second == b->second) {
      throw fail("node " + std::to_string(e.id) +
                 " is a loop; components must be smooth");
    }
    nodes_.push_back({e.id, std::min(a->second, b->second),
                      std::max(a->second, b->second)});
  }

  index();
  if (!is_connected(all())) throw fail("the dual graph is not connected");
}

CurveGraph CurveGraph::from_indices(
    const std::vector<std::int64_t>& genera,
    const std::vector<std::pair<std::size_t, std::size_t>>& ends) {
  std::vector<VertexSpec> vs;
  vs.reserve(genera.size());
  for (std::size_t i = 0; i < genera.size(); ++i) {
    vs.push_back({static_cast<std::int64_t>(i + 1), genera[i]});
  }
  std::vector<EdgeSpec> es;
  es.reserve(ends.size());
  for (std::size_t j = 0; j < ends.size(); ++j) {
    es.push_back({static_cast<std::int64_t>(j + 1),
                  static_cast<std::int64_t>(ends[j].first + 1),
                  static_cast<std::int64_t>(ends[j].second + 1)});
  }
  return CurveGraph(std::move(vs), std::move(es));
}

void CurveGraph::index() {
  const std::size_t gamma = components_.size();
  valence_.assign(gamma, 0);
  neighbours_.assign(gamma, 0);
  incident_.assign(gamma, {});
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    const Node& n = nodes_[j];
    ++valence_[n.a];
    ++valence_[n.b];
    neighbours_[n.a] |= std::uint64_t{1} << n.b;
    neighbours_[n.b] |= std::uint64_t{1} << n.a;
    incident_[n.a].push_back(j);
    incident_[n.b].push_back(j);
  }
}

std::optional<std::size_t> CurveGraph::index_of_component(
    std::int64_t id) const {
  const auto it = std::lower_bound(
      components_.begin(), components_.end(), id,
      [](const Component& c, std::int64_t key) { return c.id < key; });
  if (it == components_.end() || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - components_.begin());
}

std::optional<std::size_t> CurveGraph::index_of_node(std::int64_t id) const {
  const auto it = std::lower_bound(
      nodes_.begin(), nodes_.end(), id,
      [](const Node& n, std::int64_t key) { return n.id < key; });
  if (it == nodes_.end() || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

std::int64_t CurveGraph::total_genus() const {
  std::int64_t sum = 0;
  for (const auto& c : components_) sum += c.genus;
  return sum;
}

std::int64_t CurveGraph::arithmetic_genus() const {
  return total_genus() + static_cast<std::int64_t>(nodes_.size()) -
         static_cast<std::int64_t>(components_.size()) + 1;
}

std::int64_t CurveGraph::betti_number() const {
  return static_cast<std::int64_t>(nodes_.size()) -
         static_cast<std::int64_t>(components_.size()) + 1;
}

bool CurveGraph::is_connected(Subcurve b) const {
  const std::uint64_t target = b.bits();
  if (target == 0) return false;
  std::uint64_t reached = target & (~target + 1);
  std::uint64_t frontier = reached;
  while (frontier != 0) {
    std::uint64_t next = 0;
    for (std::uint64_t f = frontier; f != 0; f &= f - 1) {
      next |= neighbours_[static_cast<std::size_t>(std::countr_zero(f))];
    }
    next &= target & ~reached;
    reached |= next;
    frontier = next;
  }
  return reached == target;
}

std::int64_t CurveGraph::internal_nodes(Subcurve b) const {
  std::int64_t count = 0;
  for (const Node& n : nodes_) {
    if (b.contains(n.a) && b.contains(n.b)) ++count;
  }
  return count;
}

std::int64_t CurveGraph::boundary(Subcurve b) const {
  std::int64_t count = 0;
  for (const Node& n : nodes_) {
    if (b.contains(n.a) != b.contains(n.b)) ++count;
  }
  return count;
}

std::int64_t CurveGraph::genus(Subcurve b) const {
  if (b.empty()) throw Error(Errc::empty_subcurve, "subcurve is empty");
  std::int64_t genera = 0;
  for (const std::size_t i : b.members()) genera += components_[i].genus;
  return genera + internal_nodes(b) - static_cast<std::int64_t>(b.size()) + 1;
}

bool CurveGraph::operator==(const CurveGraph& other) const {
  if (components_.size() != other.components_.size() ||
      nodes_.size() != other.nodes_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (components_[i].id != other.components_[i].id ||
        components_[i].genus != other.components_[i].genus) {
      return false;
    }
  }
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    const Node& x = nodes_[j];
    const Node& y = other.nodes_[j];
    if (x.id != y.id || x.a != y.a || x.b != y.b) return false;
  }
  return true;
}

Subcurve exceptional_components(const CurveGraph& c) {
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < c.num_components(); ++i) {
    if (c.component(i).genus == 0 && c.valence(i) == 2) {
      bits |= std::uint64_t{1} << i;
    }
  }
  return Subcurve(bits);
}

CurveClass classify(const CurveGraph& c) {
  CurveClass out;
  out.compact_type = c.betti_number() == 0;

  const bool genus_ok = c.arithmetic_genus() >= 2;
  bool rational_ge3 = true;
  bool rational_ge2 = true;
  bool all_rational = true;
  bool all_valence_two = true;
  for (std::size_t i = 0; i < c.num_components(); ++i) {
    const bool rational = c.component(i).genus == 0;
    all_rational = all_rational && rational;
    all_valence_two = all_valence_two && c.valence(i) == 2;
    if (rational && c.valence(i) < 3) rational_ge3 = false;
    if (rational && c.valence(i) < 2) rational_ge2 = false;
  }
  out.stable = genus_ok && rational_ge3;
  out.semistable = genus_ok && rational_ge2;

  if (out.semistable) {
    const Subcurve exceptional = exceptional_components(c);
    bool adjacent = false;
    for (const std::size_t i : exceptional.members()) {
      if ((c.neighbours(i) & exceptional.bits()) != 0) adjacent = true;
    }
    out.quasistable = !adjacent;
  }

  // Connected with every valence 2 means the dual graph is one cycle.
  out.cycle_of_rationals = c.num_components() >= 2 && all_rational &&
                           all_valence_two &&
                           c.num_nodes() == c.num_components();
  return out;
}

void for_each_proper_connected_subcurve(
    const CurveGraph& c, const std::function<void(Subcurve)>& visit) {
  const std::size_t gamma = c.num_components();
  if (gamma < 2) return;
  const std::uint64_t full = c.all().bits();
  for (std::uint64_t bits = 1; bits < full; ++bits) {
    const Subcurve b(bits);
    if (c.is_connected(b)) visit(b);
  }
}

std::vector<Subcurve> enumerate_proper_connected_subcurves(const CurveGraph& c) {
  std::vector<Subcurve> out;
  for_each_proper_connected_subcurve(c, [&](Subcurve b) { out.push_back(b); });
  return out;
}

std::string export_dot(const CurveGraph& c) {
  std::ostringstream os;
  os << "graph dual {\n";
  for (const Component& v : c.components()) {
    os << "  v" << v.id << " [label=\"C_" << v.id << " (g=" << v.genus
       << ")\"];\n";
  }
  for (const Node& n : c.nodes()) {
    os << "  v" << c.component(n.a).id << " -- v" << c.component(n.b).id
       << " [label=\"p_" << n.id << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace nodal
