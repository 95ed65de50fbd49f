#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "lipgap/adversary.hpp"
#include "lipgap/extension_lab.hpp"
#include "lipgap/gap_structure.hpp"
#include "lipgap/glued_space.hpp"
#include "lipgap/lipschitz_maps.hpp"
#include "lipgap/vertex_cube.hpp"

namespace lipgap {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Every reader throws Error(Parse) on malformed input.
Rational rational_from(const Json& j, const std::string& what);
Json to_json(const Rational& r);
Json to_json(const std::vector<Rational>& v);
std::vector<Rational> rationals_from(const Json& j, const std::string& what);

// {"eps0", "terms", "tail_bound"?, "tail_ratio"?} or {"eps0", "geometric": {"first", "ratio", "materialized"}}
GammaSequence gamma_from(const Json& j);
Json to_json(const GammaSequence& g);

Json to_json(const Gap& g);
Json to_json(const GapStructure& gs);
Json to_json(const FeasibilityResult& r);
Json to_json(const JumpCertificate& c);
Json to_json(const SweepChain& c);
Json to_json(const AdversaryPrefix& p);
AdversaryPrefix prefix_from(const Json& j);
Json to_json(const DefeatVerdict& v);

// sheets: {"id": {"gamma": {...}, "depth": n, "enumeration"?: name}}
GluedSpace glued_space_from(const Json& j);
GluedPoint glued_point_from(const Json& j);
Json to_json(const GluedPoint& p);

SheetSpec sheet_spec_from(const Json& j);
Json to_json(const SheetSpec& s);
CubePoint cube_point_from(const Json& j);
Json to_json(const CubePoint& p);
Json to_json(const DefeatWitness& w);
DefeatWitness witness_from(const Json& j);
RetractionTable retraction_from(const Json& j);
Json to_json(const ViolationReport& r);

// {"ids": [...], "base": id, "dist": [[...], ...]}
FiniteMetricSpace metric_space_from(const Json& j);
// header "id,<id1>,<id2>,..." then one row per point; base is the first id unless given
FiniteMetricSpace metric_space_from_csv(const std::string& text, const std::string& base = "");
Json to_json(const FiniteMetricSpace& M);
std::vector<int> ids_from(const FiniteMetricSpace& M, const Json& j);
Json ids_json(const FiniteMetricSpace& M, const std::vector<int>& pts);
Json to_json(const FiniteMetricSpace& M, const NetResult& n);
Json to_json(const FiniteMetricSpace& M, const SeparatedChain& c);
SeparatedChain chain_from(const FiniteMetricSpace& M, const Json& j);
Json to_json(const FiniteMetricSpace& M, const ExtensionOperator& T);

}  // namespace lipgap
