#include "nodal/balanced.hpp"
#include "nodal/curve.hpp"
#include "nodal/error.hpp"
#include "nodal/goodness.hpp"
#include "nodal/io.hpp"
#include "nodal/paths.hpp"
#include "nodal/polarization.hpp"
#include "nodal/search.hpp"
#include "nodal/sheaf.hpp"
#include "nodal/stability.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <map>

using namespace nodal;

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;

constexpr std::size_t kTableLimit = 12;

struct Inputs {
  std::string curve;
  std::string polarization;
  std::string sheaf;
  std::int64_t max_rank = 0;
  std::int64_t base = 0;
  std::string degrees;
  std::int64_t denominator = kDefaultWitnessDenominator;
  std::string format = "json";
  std::string dot_format = "dot";
  std::string input;
};

CurveGraph load_curve(const Inputs& in) {
  return curve_from_json(read_json_file(in.curve));
}

Polarization load_polarization(const Inputs& in, const CurveGraph& c) {
  Polarization w = polarization_from_json(read_json_file(in.polarization));
  check_dimension(c, w);
  return w;
}

std::int64_t rank_bound(const Inputs& in, const CurveGraph& c) {
  return in.max_rank > 0 ? in.max_rank : default_max_rank(c);
}

std::size_t base_index(const Inputs& in, const CurveGraph& c) {
  if (in.base == 0) return c.num_components() - 1;  // highest id
  const auto idx = c.index_of_component(in.base);
  if (!idx) {
    throw Error(Errc::unknown_vertex,
                "no component with id " + std::to_string(in.base));
  }
  return *idx;
}

void print(const Json& j) { std::cout << dump_json(j); }

int cmd_analyze(const Inputs& in) {
  const CurveGraph c = load_curve(in);
  const Polarization w = load_polarization(in, c);
  const auto lambda = lambda_vector(c, w);
  Json out{{"arithmetic_genus", c.arithmetic_genus()},
           {"euler_characteristic", c.euler_characteristic()},
           {"components", c.num_components()},
           {"nodes", c.num_nodes()},
           {"classification", class_to_json(classify(c))},
           {"weights", rationals_to_json(w.weights())},
           {"lambda", rationals_to_json(lambda)}};
  if (c.num_components() <= kTableLimit) {
    Json table = Json::array();
    for_each_proper_connected_subcurve(c, [&](Subcurve b) {
      table.push_back({{"B", subcurve_ids(c, b)},
                       {"genus", c.genus(b)},
                       {"boundary", c.boundary(b)},
                       {"delta", format_rational(delta_structure(c, lambda, b))}});
    });
    out["subcurves"] = std::move(table);
  } else {
    out["subcurves"] = "suppressed: more than 12 components";
  }
  out["stability"] = stability_to_json(c, oc_stability(c, w));
  const GoodnessVerdict g = decide(c, w, rank_bound(in, c));
  out["goodness"] = goodness_to_json(c, g);
  print(out);
  return g.status == GoodnessStatus::not_good ? kNegative : kOk;
}

int cmd_canonical(const Inputs& in) {
  print(polarization_to_json(canonical_polarization(load_curve(in))));
  return kOk;
}

int cmd_stability(const Inputs& in) {
  const CurveGraph c = load_curve(in);
  const Polarization w = load_polarization(in, c);
  if (!in.sheaf.empty()) {
    const SheafDatum e = sheaf_from_json(read_json_file(in.sheaf), c);
    const StabilityVerdict v = rank1_stability(c, w, e);
    print(stability_to_json(c, v));
    return v.stable ? kOk : kNegative;
  }
  const StabilityVerdict v = oc_stability(c, w);
  Json out = stability_to_json(c, v);
  if (c.arithmetic_genus() >= 2) {
    Json stars = Json::array();
    for (const StarCondition& s : star_conditions(c, w)) {
      stars.push_back({{"B", subcurve_ids(c, s.subcurve)}, {"satisfied", s.satisfied}});
    }
    out["star_conditions"] = std::move(stars);
  }
  print(out);
  return v.stable ? kOk : kNegative;
}

int cmd_goodness(const Inputs& in) {
  const CurveGraph c = load_curve(in);
  const Polarization w = load_polarization(in, c);
  const GoodnessVerdict g = decide(c, w, rank_bound(in, c));
  print(goodness_to_json(c, g));
  return g.status == GoodnessStatus::not_good ? kNegative : kOk;
}

int cmd_conjecture(const Inputs& in) {
  const CurveGraph c = load_curve(in);
  const Polarization w = load_polarization(in, c);
  const ConjectureProbe p = conjecture_probe(c, w, rank_bound(in, c));
  print(probe_to_json(c, p));
  return p.discrepancy() ? kNegative : kOk;
}

int cmd_sheaf(const Inputs& in) {
  const CurveGraph c = load_curve(in);
  const Polarization w = load_polarization(in, c);
  const SheafDatum e = sheaf_from_json(read_json_file(in.sheaf), c);
  const SlopeReport slope = slope_report(c, w, e);
  const PathSystem ps = build_path_system(c, base_index(in, c));
  const AjFamily fam = aj_family(c, w, ps);
  verify_path_identities(c, ps, e);
  Json out{{"locally_free", is_locally_free(c, e)},
           {"residual_ranks", residual_ranks(c, e)},
           {"wrank", format_rational(slope.wrank)},
           {"chi", slope.chi},
           {"wdeg", format_rational(slope.wdeg)}};
  out["wslope"] = slope.wslope ? Json(format_rational(*slope.wslope)) : Json(nullptr);
  out["delta_general"] = format_rational(delta_general(c, w, e));
  out["delta_residual"] = format_rational(delta_residual(c, w, e));
  out["delta_decomposed"] = format_rational(delta_decomposed(c, w, ps, fam, e));
  print(out);
  return kOk;
}

int cmd_balanced(const Inputs& in) {
  const CurveGraph c = load_curve(in);
  const MultidegreeBundle l{parse_int_list(in.degrees)};
  const BalanceReport r = check_balanced(c, l);
  Json out = balance_to_json(c, r);
  out["bridge"] = bridge_to_json(balanced_stability_bridge(c, l));
  print(out);
  return r.balanced ? kOk : kNegative;
}

int cmd_paths(const Inputs& in) {
  const CurveGraph c = load_curve(in);
  const Polarization w = load_polarization(in, c);
  const PathSystem ps = build_path_system(c, base_index(in, c));
  verify_path_system(c, ps);
  print(path_system_to_json(c, ps, aj_family(c, w, ps)));
  return kOk;
}

int cmd_polytope(const Inputs& in) {
  const CurveGraph c = load_curve(in);
  print(polytope_to_json(c, stability_polytope(c, in.denominator)));
  return kOk;
}

int cmd_export_dot(const Inputs& in) {
  const CurveGraph c = load_curve(in);
  if (in.dot_format == "json") {
    print(curve_to_json(c));
  } else {
    std::cout << export_dot(c);
  }
  return kOk;
}

int cmd_normalize(const Inputs& in) {
  print(normalize_document(read_json_file(in.input)));
  return kOk;
}

struct SearchArgs {
  CampaignConfig cfg;
  std::string mode = "exhaustive";
  std::string filter = "all";
  std::string csv_path;
  std::string summary_path;
};

int cmd_search(const Inputs& in, SearchArgs& args) {
  CampaignConfig& cfg = args.cfg;
  cfg.mode = args.mode == "random" ? SearchMode::random : SearchMode::exhaustive;
  static const std::map<std::string, CurveFilter> filters{
      {"all", CurveFilter::all},
      {"compact-type", CurveFilter::compact_type},
      {"genus-at-most-one", CurveFilter::genus_at_most_one},
      {"stable", CurveFilter::stable}};
  cfg.filter = filters.at(args.filter);

  std::ofstream csv_file;
  std::ostream* csv = nullptr;
  if (!args.csv_path.empty()) {
    csv_file.open(args.csv_path);
    if (!csv_file) throw Error(Errc::parse_error, args.csv_path + ": cannot write");
    csv = &csv_file;
  } else if (in.format == "csv") {
    csv = &std::cout;
  }
  const CampaignReport report = run_campaign(cfg, csv);
  const Json summary = campaign_summary_to_json(cfg, report);
  if (!args.summary_path.empty()) {
    std::ofstream out(args.summary_path);
    if (!out) throw Error(Errc::parse_error, args.summary_path + ": cannot write");
    out << dump_json(summary);
  }
  if (in.format == "json") {
    print(summary);
  } else {
    std::cerr << "instances " << report.instances_checked << ", discrepancies "
              << report.discrepancies.size() << ", identity failures "
              << report.identity_failures.size() << '\n';
  }
  return report.consistent() ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability and goodness of polarizations on nodal curves"};
  app.require_subcommand(1);
  Inputs in;
  SearchArgs search;

  const auto curve_opt = [&](CLI::App* sub) {
    sub->add_option("--curve", in.curve, "curve JSON file")->required()->check(CLI::ExistingFile);
  };
  const auto pol_opt = [&](CLI::App* sub) {
    sub->add_option("--polarization", in.polarization, "polarization JSON file")
        ->required()
        ->check(CLI::ExistingFile);
  };
  const auto rank_opt = [&](CLI::App* sub) {
    sub->add_option("--max-rank", in.max_rank, "rank bound for the witness search (default 2*gamma)")
        ->check(CLI::PositiveNumber);
  };
  const auto base_opt = [&](CLI::App* sub) {
    sub->add_option("--base", in.base, "base component id (default: largest id)");
  };

  std::map<CLI::App*, std::function<int()>> handlers;
  const auto add = [&](const char* name, const char* help, std::function<int()> run) {
    CLI::App* sub = app.add_subcommand(name, help);
    handlers[sub] = std::move(run);
    return sub;
  };

  auto* analyze = add("analyze", "invariants, subcurve table, stability and goodness",
                      [&] { return cmd_analyze(in); });
  curve_opt(analyze);
  pol_opt(analyze);
  rank_opt(analyze);

  auto* canonical = add("canonical", "canonical polarization of a stable curve",
                        [&] { return cmd_canonical(in); });
  curve_opt(canonical);

  auto* stability = add("stability", "stability of O_C, or of a rank-one datum with --sheaf",
                        [&] { return cmd_stability(in); });
  curve_opt(stability);
  pol_opt(stability);
  stability->add_option("--sheaf", in.sheaf, "sheaf JSON with all ranks 1")->check(CLI::ExistingFile);

  auto* goodness = add("goodness", "goodness verdict", [&] { return cmd_goodness(in); });
  curve_opt(goodness);
  pol_opt(goodness);
  rank_opt(goodness);

  auto* conjecture = add("conjecture", "compare stability of O_C with goodness",
                         [&] { return cmd_conjecture(in); });
  curve_opt(conjecture);
  pol_opt(conjecture);
  rank_opt(conjecture);

  auto* sheaf = add("sheaf", "slope data and the three Delta formulas for a datum",
                    [&] { return cmd_sheaf(in); });
  curve_opt(sheaf);
  pol_opt(sheaf);
  base_opt(sheaf);
  sheaf->add_option("--sheaf", in.sheaf, "sheaf JSON file")->required()->check(CLI::ExistingFile);

  auto* balanced = add("balanced", "balanced and strictly balanced checks",
                       [&] { return cmd_balanced(in); });
  curve_opt(balanced);
  balanced->add_option("--degrees", in.degrees, "multidegree, comma separated")->required();

  auto* paths = add("paths", "marking, minimal-path tree, orientation and A_j table",
                    [&] { return cmd_paths(in); });
  curve_opt(paths);
  pol_opt(paths);
  base_opt(paths);

  auto* polytope = add("polytope", "inequalities for polarizations making O_C stable",
                       [&] { return cmd_polytope(in); });
  curve_opt(polytope);
  polytope->add_option("--denominator", in.denominator, "denominator bound for the witness grid")
      ->check(CLI::PositiveNumber);

  auto* dot = add("export-dot", "Graphviz rendering of the dual graph",
                  [&] { return cmd_export_dot(in); });
  curve_opt(dot);
  dot->add_option("--format", in.dot_format, "dot|json")->check(CLI::IsMember({"dot", "json"}));

  auto* normalize = add("normalize", "canonical form of a curve, polarization or sheaf file",
                        [&] { return cmd_normalize(in); });
  normalize->add_option("input", in.input, "JSON file")->required()->check(CLI::ExistingFile);

  auto* campaign = add("search-conjecture", "campaign over enumerated curves and polarizations",
                       [&] { return cmd_search(in, search); });
  CampaignConfig& cfg = search.cfg;
  campaign->add_option("--max-vertices", cfg.max_vertices)->check(CLI::Range(1, 62));
  campaign->add_option("--max-edges", cfg.max_edges);
  campaign->add_option("--max-genus", cfg.max_genus)->check(CLI::NonNegativeNumber);
  campaign->add_option("--denominator", cfg.weight_denominator_bound, "weight denominator bound")
      ->check(CLI::PositiveNumber);
  campaign->add_option("--max-rank", cfg.max_rank, "rank bound (default 3*gamma)")
      ->check(CLI::NonNegativeNumber);
  campaign->add_option("--seed", cfg.seed);
  campaign->add_option("--mode", search.mode)->check(CLI::IsMember({"exhaustive", "random"}));
  campaign->add_option("--samples", cfg.sample_count, "polarizations per curve in random mode");
  campaign->add_option("--filter", search.filter)
      ->check(CLI::IsMember({"all", "compact-type", "genus-at-most-one", "stable"}));
  campaign->add_option("--threads", cfg.threads)->check(CLI::PositiveNumber);
  campaign->add_option("--identity-samples", cfg.identity_samples);
  campaign->add_option("--csv", search.csv_path, "write the per-instance CSV here");
  campaign->add_option("--summary", search.summary_path, "write the JSON summary here");
  campaign->add_option("--format", in.format, "json|csv on stdout")
      ->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    for (auto& [sub, run] : handlers) {
      if (sub->parsed()) return run();
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
