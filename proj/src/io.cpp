#include "nodal/io.hpp"

#include "nodal/error.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace nodal {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& why) {
  throw Error(Errc::parse_error, path + ": " + why);
}

void only_keys(const Json& obj, const std::string& path,
               std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) bad(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) bad(path + "." + key, "unknown field");
  }
}

const Json& field(const Json& obj, const char* key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) bad(path + "." + key, "missing field");
  return *it;
}

std::int64_t as_int(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) bad(path, "expected an integer");
  if (v.is_number_unsigned() && v.get<std::uint64_t>() > INT64_MAX) {
    bad(path, "integer out of range");
  }
  return v.get<std::int64_t>();
}

std::vector<std::int64_t> as_int_array(const Json& v, const std::string& path) {
  if (!v.is_array()) bad(path, "expected an array of integers");
  std::vector<std::int64_t> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    out.push_back(as_int(v[k], path + "[" + std::to_string(k) + "]"));
  }
  return out;
}

Rational as_rational(const Json& v, const std::string& path) {
  if (v.is_number_integer()) return make_rational(as_int(v, path));
  if (!v.is_string()) bad(path, "expected a rational string \"p/q\"");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const Error& err) {
    bad(path, err.what());
  }
}

std::string location(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

Json rational_json(const Rational& r) { return format_rational(r); }

Json optional_rational(const std::optional<Rational>& r) {
  return r ? rational_json(*r) : Json(nullptr);
}

}  // namespace

Json parse_json_text(std::string_view text, const std::string& source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& err) {
    std::string what = err.what();
    throw Error(Errc::parse_error,
                source + ": " + location(text, err.byte == 0 ? 0 : err.byte - 1) +
                    ": invalid JSON (" + what + ")");
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::parse_error, path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path);
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

CurveGraph curve_from_json(const Json& j) {
  only_keys(j, "curve", {"vertices", "edges"});
  const Json& vs = field(j, "vertices", "curve");
  if (!vs.is_array()) bad("curve.vertices", "expected an array");
  std::vector<CurveGraph::VertexSpec> vertices;
  for (std::size_t k = 0; k < vs.size(); ++k) {
    const std::string path = "curve.vertices[" + std::to_string(k) + "]";
    only_keys(vs[k], path, {"id", "genus"});
    vertices.push_back({as_int(field(vs[k], "id", path), path + ".id"),
                        as_int(field(vs[k], "genus", path), path + ".genus")});
  }
  std::vector<CurveGraph::EdgeSpec> edges;
  if (const auto it = j.find("edges"); it != j.end()) {
    if (!it->is_array()) bad("curve.edges", "expected an array");
    for (std::size_t k = 0; k < it->size(); ++k) {
      const Json& e = (*it)[k];
      const std::string path = "curve.edges[" + std::to_string(k) + "]";
      only_keys(e, path, {"id", "ends"});
      const auto ends = as_int_array(field(e, "ends", path), path + ".ends");
      if (ends.size() != 2) bad(path + ".ends", "expected exactly two vertex ids");
      edges.push_back({as_int(field(e, "id", path), path + ".id"), ends[0], ends[1]});
    }
  }
  return CurveGraph(std::move(vertices), std::move(edges));
}

Json curve_to_json(const CurveGraph& c) {
  Json out = Json::object();
  Json vs = Json::array();
  for (const Component& comp : c.components()) {
    vs.push_back({{"id", comp.id}, {"genus", comp.genus}});
  }
  Json es = Json::array();
  for (const Node& n : c.nodes()) {
    es.push_back({{"id", n.id},
                  {"ends", {c.component(n.a).id, c.component(n.b).id}}});
  }
  out["vertices"] = std::move(vs);
  out["edges"] = std::move(es);
  return out;
}

Polarization polarization_from_json(const Json& j) {
  only_keys(j, "polarization", {"weights"});
  const Json& ws = field(j, "weights", "polarization");
  if (!ws.is_array()) bad("polarization.weights", "expected an array");
  std::vector<Rational> weights;
  for (std::size_t k = 0; k < ws.size(); ++k) {
    weights.push_back(as_rational(ws[k], "polarization.weights[" + std::to_string(k) + "]"));
  }
  return Polarization(std::move(weights));
}

Json polarization_to_json(const Polarization& w) {
  return Json{{"weights", rationals_to_json(w.weights())}};
}

SheafDatum sheaf_from_json(const Json& j) {
  only_keys(j, "sheaf", {"ranks", "degrees", "stalk_free"});
  SheafDatum e;
  e.ranks = as_int_array(field(j, "ranks", "sheaf"), "sheaf.ranks");
  if (const auto it = j.find("degrees"); it != j.end()) {
    e.degrees = as_int_array(*it, "sheaf.degrees");
    if (e.degrees.size() != e.ranks.size()) {
      bad("sheaf.degrees", "length differs from sheaf.ranks");
    }
  } else {
    e.degrees.assign(e.ranks.size(), 0);
  }
  e.stalk_free = as_int_array(field(j, "stalk_free", "sheaf"), "sheaf.stalk_free");
  return e;
}

SheafDatum sheaf_from_json(const Json& j, const CurveGraph& c) {
  SheafDatum e = sheaf_from_json(j);
  validate(c, e);
  return e;
}

Json sheaf_to_json(const SheafDatum& e) {
  return Json{{"ranks", e.ranks},
              {"degrees", e.degrees},
              {"stalk_free", e.stalk_free}};
}

std::vector<std::int64_t> parse_int_list(std::string_view text) {
  std::vector<std::int64_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string_view item = text.substr(pos, comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    std::int64_t value = 0;
    const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || ec != std::errc() || end != item.data() + item.size()) {
      throw Error(Errc::parse_error,
                  "bad integer '" + std::string(item) + "' in list '" +
                      std::string(text) + "'");
    }
    out.push_back(value);
    pos = comma + 1;
  }
  return out;
}

DocumentKind document_kind(const Json& j) {
  if (!j.is_object()) bad("document", "expected an object");
  if (j.contains("vertices")) return DocumentKind::curve;
  if (j.contains("weights")) return DocumentKind::polarization;
  if (j.contains("ranks")) return DocumentKind::sheaf;
  bad("document", "not a curve, polarization or sheaf document");
}

Json normalize_document(const Json& j) {
  switch (document_kind(j)) {
    case DocumentKind::curve: return curve_to_json(curve_from_json(j));
    case DocumentKind::polarization:
      return polarization_to_json(polarization_from_json(j));
    case DocumentKind::sheaf: return sheaf_to_json(sheaf_from_json(j));
  }
  return j;
}

Json subcurve_ids(const CurveGraph& c, Subcurve b) {
  Json out = Json::array();
  for (const std::size_t i : b.members()) out.push_back(c.component(i).id);
  return out;
}

Json rationals_to_json(std::span<const Rational> values) {
  Json out = Json::array();
  for (const Rational& v : values) out.push_back(format_rational(v));
  return out;
}

Json class_to_json(const CurveClass& cls) {
  return Json{{"compact_type", cls.compact_type},
              {"stable", cls.stable},
              {"semistable", cls.semistable},
              {"quasistable", cls.quasistable},
              {"cycle_of_rationals", cls.cycle_of_rationals}};
}

Json stability_to_json(const CurveGraph& c, const StabilityVerdict& v) {
  Json out{{"stable", v.stable}, {"semistable", v.semistable}};
  if (v.failing) {
    out["witness"] = Json{{"B", subcurve_ids(c, v.failing->subcurve)},
                          {"delta", rational_json(v.failing->value)}};
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

Json goodness_to_json(const CurveGraph& c, const GoodnessVerdict& v) {
  Json out{{"status", to_string(v.status)}};
  out["certificate_base"] =
      v.certificate_base ? Json(c.component(*v.certificate_base).id) : Json(nullptr);
  if (v.witness) {
    Json wit = sheaf_to_json(v.witness->datum);
    wit["delta"] = rational_json(v.witness->delta);
    wit["locally_free"] = is_locally_free(c, v.witness->datum);
    out["witness"] = std::move(wit);
  } else {
    out["witness"] = nullptr;
  }
  out["searched_rank_bound"] =
      v.searched_rank_bound ? Json(*v.searched_rank_bound) : Json(nullptr);
  out["delta_min"] = optional_rational(v.delta_min);
  return out;
}

Json probe_to_json(const CurveGraph& c, const ConjectureProbe& p) {
  return Json{{"stability", stability_to_json(c, p.stability)},
              {"goodness", goodness_to_json(c, p.goodness)},
              {"outcome", to_string(p.outcome)}};
}

Json path_system_to_json(const CurveGraph& c, const PathSystem& ps,
                         const AjFamily& family) {
  const auto cid = [&](std::size_t i) { return c.component(i).id; };
  const auto nid = [&](std::size_t j) { return c.node(j).id; };
  Json marking = Json::array();
  Json tree_edges = Json::array();
  Json orientation = Json::array();
  for (std::size_t j = 0; j < c.num_nodes(); ++j) {
    if (ps.marked[j]) marking.push_back(nid(j));
    if (ps.tree_edge[j]) tree_edges.push_back(nid(j));
    orientation.push_back({{"node", nid(j)},
                           {"precedes", cid(ps.orientation[j].first)},
                           {"follows", cid(ps.orientation[j].second)}});
  }
  Json tree = Json::array();
  for (std::size_t i = 0; i < c.num_components(); ++i) {
    Json path = Json::array();
    for (const std::size_t j : ps.path_edges(i)) path.push_back(nid(j));
    Json entry{{"component", cid(i)}, {"depth", ps.depth[i]}};
    entry["parent"] = ps.parent[i] ? Json(cid(ps.parent[i]->parent)) : Json(nullptr);
    entry["edge"] = ps.parent[i] ? Json(nid(ps.parent[i]->edge)) : Json(nullptr);
    entry["path"] = std::move(path);
    tree.push_back(std::move(entry));
  }
  const auto conditions = star2_conditions(family);
  Json aj = Json::array();
  for (const AjEntry& entry : family.entries) {
    Json row{{"node", nid(entry.edge)}, {"A", subcurve_ids(c, entry.subcurve)}};
    if (entry.delta) {
      row["boundary"] = entry.boundary;
      row["delta"] = rational_json(*entry.delta);
      for (const auto& cond : conditions) {
        if (cond.edge == entry.edge) row["star2"] = cond.satisfied;
      }
    } else {
      row["boundary"] = nullptr;
      row["delta"] = nullptr;
      row["star2"] = nullptr;
    }
    aj.push_back(std::move(row));
  }
  return Json{{"base", cid(ps.base)},
              {"marking", std::move(marking)},
              {"tree_edges", std::move(tree_edges)},
              {"tree", std::move(tree)},
              {"orientation", std::move(orientation)},
              {"A", std::move(aj)},
              {"all_star2", all_star2_satisfied(family)}};
}

Json polytope_to_json(const CurveGraph& c, const StabilityPolytope& poly) {
  Json ineqs = Json::array();
  for (const PolytopeInequality& q : poly.inequalities) {
    ineqs.push_back({{"B", subcurve_ids(c, q.subcurve)},
                     {"lower", rational_json(q.lower)},
                     {"upper", rational_json(q.upper)}});
  }
  Json out{{"inequalities", std::move(ineqs)}};
  out["witness"] = poly.witness ? polarization_to_json(*poly.witness) : Json(nullptr);
  return out;
}

Json balance_to_json(const CurveGraph& c, const BalanceReport& r) {
  Json bad_exc = Json::array();
  for (const std::size_t i : r.bad_exceptional) bad_exc.push_back(c.component(i).id);
  Json violations = Json::array();
  for (const BalanceViolation& v : r.violations) {
    violations.push_back({{"B", subcurve_ids(c, v.subcurve)},
                          {"excess", rational_json(v.excess)},
                          {"bound", rational_json(v.bound)},
                          {"equality", v.boundary_only}});
  }
  return Json{{"balanced", r.balanced},
              {"strict", r.strictly_balanced},
              {"bad_exceptional", std::move(bad_exc)},
              {"violations", std::move(violations)}};
}

Json bridge_to_json(const BridgeReport& r) {
  Json out{{"applicable", r.applicable}};
  if (!r.applicable) {
    out["reason"] = r.reason;
    return out;
  }
  out["strictly_balanced"] = r.strictly_balanced;
  out["oc_stable"] = r.oc_stable;
  out["goodness"] = r.goodness ? Json(to_string(*r.goodness)) : Json(nullptr);
  out["consistent"] = r.consistent;
  return out;
}

namespace {

const char* filter_name(CurveFilter f) {
  switch (f) {
    case CurveFilter::all: return "all";
    case CurveFilter::compact_type: return "compact-type";
    case CurveFilter::genus_at_most_one: return "genus-at-most-one";
    case CurveFilter::stable: return "stable";
  }
  return "?";
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

Json campaign_config_to_json(const CampaignConfig& cfg) {
  return Json{{"max_vertices", cfg.max_vertices},
              {"max_edges", cfg.max_edges},
              {"max_genus", cfg.max_genus},
              {"denominator", cfg.weight_denominator_bound},
              {"max_rank", cfg.max_rank == 0 ? Json("3*gamma") : Json(cfg.max_rank)},
              {"seed", cfg.seed},
              {"mode", cfg.mode == SearchMode::exhaustive ? "exhaustive" : "random"},
              {"sample_count", cfg.sample_count},
              {"filter", filter_name(cfg.filter)},
              {"threads", cfg.threads},
              {"identity_samples", cfg.identity_samples}};
}

Json campaign_summary_to_json(const CampaignConfig& cfg, const CampaignReport& r) {
  Json discrepancies = Json::array();
  for (const DiscrepancyRecord& d : r.discrepancies) {
    discrepancies.push_back({{"instance", d.instance},
                             {"curve_hash", hex(d.curve_hash)},
                             {"curve", curve_to_json(d.curve)},
                             {"polarization", polarization_to_json(d.polarization)},
                             {"stable", d.stable},
                             {"goodness", to_string(d.status)},
                             {"outcome", to_string(d.outcome)}});
  }
  Json failures = Json::array();
  for (const IdentityFailure& f : r.identity_failures) {
    failures.push_back({{"instance", f.instance},
                        {"curve_hash", hex(f.curve_hash)},
                        {"message", f.message}});
  }
  return Json{{"config", campaign_config_to_json(cfg)},
              {"curves_checked", r.curves_checked},
              {"instances_checked", r.instances_checked},
              {"stable", r.stable_count},
              {"good_certified", r.certified_count},
              {"not_good", r.not_good_count},
              {"evidence_good", r.evidence_count},
              {"discrepancies", std::move(discrepancies)},
              {"identity_failures", std::move(failures)},
              {"consistent", r.consistent()},
              {"digest", hex(r.digest)},
              {"wall_time_ms", r.wall_time_ms}};
}

}  // namespace nodal
