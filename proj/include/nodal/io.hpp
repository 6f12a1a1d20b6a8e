#pragma once

// JSON reading and writing. Input errors raise Error{Errc::parse_error} (or
// the validating constructor's code) with the offending field path in the
// message.

#include "nodal/balanced.hpp"
#include "nodal/curve.hpp"
#include "nodal/goodness.hpp"
#include "nodal/paths.hpp"
#include "nodal/polarization.hpp"
#include "nodal/search.hpp"
#include "nodal/sheaf.hpp"
#include "nodal/stability.hpp"

#include "json.hpp"

#include <string>
#include <string_view>

namespace nodal {

using Json = nlohmann::ordered_json;

/// Parses text; syntax errors report line and column.
Json parse_json_text(std::string_view text, const std::string& source);
Json read_json_file(const std::string& path);
/// Two-space indented text with a trailing newline.
std::string dump_json(const Json& j);

CurveGraph curve_from_json(const Json& j);
Json curve_to_json(const CurveGraph& c);

Polarization polarization_from_json(const Json& j);
Json polarization_to_json(const Polarization& w);

/// `degrees` may be omitted (zeros). Without a curve only the shape is
/// checked; with one the datum is validated against it.
SheafDatum sheaf_from_json(const Json& j);
SheafDatum sheaf_from_json(const Json& j, const CurveGraph& c);
Json sheaf_to_json(const SheafDatum& e);

/// "1,2,3" -> {1,2,3}.
std::vector<std::int64_t> parse_int_list(std::string_view text);

enum class DocumentKind { curve, polarization, sheaf };

/// Detects the kind from the keys present.
DocumentKind document_kind(const Json& j);
/// Parses and reserializes in canonical form.
Json normalize_document(const Json& j);

Json subcurve_ids(const CurveGraph& c, Subcurve b);
Json rationals_to_json(std::span<const Rational> values);
Json class_to_json(const CurveClass& cls);
Json stability_to_json(const CurveGraph& c, const StabilityVerdict& v);
Json goodness_to_json(const CurveGraph& c, const GoodnessVerdict& v);
Json probe_to_json(const CurveGraph& c, const ConjectureProbe& p);
Json path_system_to_json(const CurveGraph& c, const PathSystem& ps,
                         const AjFamily& family);
Json polytope_to_json(const CurveGraph& c, const StabilityPolytope& poly);
Json balance_to_json(const CurveGraph& c, const BalanceReport& r);
Json bridge_to_json(const BridgeReport& r);
Json campaign_config_to_json(const CampaignConfig& cfg);
Json campaign_summary_to_json(const CampaignConfig& cfg,
                              const CampaignReport& r);

}  // namespace nodal
