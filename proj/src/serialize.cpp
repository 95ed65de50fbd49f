#include "lipgap/serialize.hpp"

#include <algorithm>
#include <sstream>

#include "lipgap/errors.hpp"

namespace lipgap {

namespace {

const Json& field(const Json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorKind::Parse, what + ": missing \"" + key + "\"");
  return j.at(key);
}

int int_from(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) fail(ErrorKind::Parse, what + ": expected an integer");
  return j.get<int>();
}

std::string string_from(const Json& j, const std::string& what) {
  if (!j.is_string()) fail(ErrorKind::Parse, what + ": expected a string");
  return j.get<std::string>();
}

const Json& array_from(const Json& j, const std::string& what) {
  if (!j.is_array()) fail(ErrorKind::Parse, what + ": expected an array");
  return j;
}

}  // namespace

Rational rational_from(const Json& j, const std::string& what) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (!j.is_string()) fail(ErrorKind::Parse, what + ": rationals are written as \"p/q\" strings");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const Error& e) {
    fail(ErrorKind::Parse, what + ": " + e.what());
  }
}

Json to_json(const Rational& r) { return r.str(); }

Json to_json(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(r.str());
  return a;
}

std::vector<Rational> rationals_from(const Json& j, const std::string& what) {
  std::vector<Rational> out;
  for (const auto& e : array_from(j, what)) out.push_back(rational_from(e, what));
  return out;
}

GammaSequence gamma_from(const Json& j) {
  Rational eps0 = rational_from(field(j, "eps0", "gamma"), "gamma.eps0");
  if (j.contains("geometric")) {
    const Json& g = j.at("geometric");
    return GammaSequence::geometric(eps0, rational_from(field(g, "first", "geometric"), "geometric.first"),
                                    rational_from(field(g, "ratio", "geometric"), "geometric.ratio"),
                                    static_cast<std::size_t>(int_from(field(g, "materialized", "geometric"),
                                                                      "geometric.materialized")));
  }
  auto terms = rationals_from(field(j, "terms", "gamma"), "gamma.terms");
  if (j.contains("tail_ratio"))
    return GammaSequence::with_geometric_tail(eps0, terms, rational_from(j.at("tail_ratio"), "gamma.tail_ratio"));
  Rational tail = j.contains("tail_bound") ? rational_from(j.at("tail_bound"), "gamma.tail_bound") : Rational(0);
  return GammaSequence(eps0, terms, tail);
}

Json to_json(const GammaSequence& g) {
  Json j;
  j["eps0"] = g.eps0().str();
  j["terms"] = to_json(std::vector<Rational>(g.terms().begin(), g.terms().end()));
  j["tail_bound"] = g.tail_bound().str();
  if (g.tail_rule()) j["tail_ratio"] = g.tail_rule()->ratio.str();
  return j;
}

Json to_json(const Gap& g) {
  Json j;
  j["source_index"] = g.source_index;
  j["empty"] = g.empty;
  if (!g.empty) {
    j["enumeration_index"] = g.enumeration_index;
    j["left"] = g.left.str();
    j["right"] = g.right().str();
  }
  j["length"] = g.length.str();
  return j;
}

Json to_json(const GapStructure& gs) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["enumeration"] = gs.enumeration();
  j["depth"] = gs.depth();
  j["gamma"] = to_json(gs.gamma());
  Json gaps = Json::array();
  for (const auto& g : gs.placements()) gaps.push_back(to_json(g));
  j["placements"] = gaps;
  return j;
}

Json to_json(const FeasibilityResult& r) {
  Json j;
  j["feasible"] = r.feasible;
  j["terminal_value"] = r.terminal_value.str();
  j["K"] = r.max_map.K().str();
  Json bp = Json::array();
  for (const auto& b : r.max_map.points()) bp.push_back(Json::array({b.x.str(), b.y.str()}));
  j["breakpoints"] = bp;
  j["blocking_chain"] = to_json(r.blocking_chain);
  return j;
}

Json to_json(const JumpCertificate& c) {
  Json j;
  j["codomain_gap"] = Json::array({c.codomain_gap.left.str(), c.codomain_gap.right().str()});
  j["domain_gap"] = Json::array({c.domain_gap.left.str(), c.domain_gap.right().str()});
  j["p_minus"] = c.p_minus.str();
  j["p_plus"] = c.p_plus.str();
  j["x_minus"] = c.x_minus.str();
  j["y_plus"] = c.y_plus.str();
  return j;
}

Json to_json(const SweepChain& c) {
  Json j;
  j["target"] = c.target_family_index;
  j["sigma"] = c.sigma;
  j["n_values"] = c.n_values;
  Json sets = Json::array();
  for (const auto& S : c.sweep_sets) {
    Json pieces = Json::array();
    for (const auto& p : S.pieces()) pieces.push_back(Json::array({p.lo.str(), p.hi.str()}));
    sets.push_back(pieces);
  }
  j["sweep_sets"] = sets;
  return j;
}

Json to_json(const AdversaryPrefix& p) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["K"] = p.K.str();
  j["eps0"] = p.eps0.str();
  j["enumeration"] = p.enumeration;
  Json fam = Json::array();
  for (const auto& g : p.family) fam.push_back(to_json(g));
  j["family"] = fam;
  j["gamma_star"] = to_json(p.gamma_star);
  Json steps = Json::array();
  for (const auto& s : p.steps) {
    Json sj;
    sj["index"] = s.index;
    sj["n_omega"] = s.n_omega;
    sj["bound"] = s.bound.str();
    sj["halvings"] = s.halvings;
    sj["target_depth"] = s.target_depth;
    Json chains = Json::array();
    for (const auto& c : s.chains) chains.push_back(to_json(c));
    sj["chains"] = chains;
    steps.push_back(sj);
  }
  j["steps"] = steps;
  return j;
}

AdversaryPrefix prefix_from(const Json& j) {
  AdversaryPrefix p;
  p.K = rational_from(field(j, "K", "prefix"), "prefix.K");
  p.eps0 = rational_from(field(j, "eps0", "prefix"), "prefix.eps0");
  p.enumeration = string_from(field(j, "enumeration", "prefix"), "prefix.enumeration");
  for (const auto& g : array_from(field(j, "family", "prefix"), "prefix.family")) p.family.push_back(gamma_from(g));
  p.gamma_star = rationals_from(field(j, "gamma_star", "prefix"), "prefix.gamma_star");
  for (const auto& sj : array_from(field(j, "steps", "prefix"), "prefix.steps")) {
    AdversaryStep s;
    s.index = int_from(field(sj, "index", "step"), "step.index");
    s.n_omega = int_from(field(sj, "n_omega", "step"), "step.n_omega");
    s.bound = rational_from(field(sj, "bound", "step"), "step.bound");
    s.halvings = int_from(field(sj, "halvings", "step"), "step.halvings");
    s.target_depth = int_from(field(sj, "target_depth", "step"), "step.target_depth");
    for (const auto& cj : array_from(field(sj, "chains", "step"), "step.chains")) {
      SweepChain c;
      c.target_family_index = int_from(field(cj, "target", "chain"), "chain.target");
      for (const auto& v : array_from(field(cj, "sigma", "chain"), "chain.sigma")) c.sigma.push_back(int_from(v, "sigma"));
      for (const auto& v : array_from(field(cj, "n_values", "chain"), "chain.n_values"))
        c.n_values.push_back(int_from(v, "n_values"));
      for (const auto& set : array_from(field(cj, "sweep_sets", "chain"), "chain.sweep_sets")) {
        OpenIntervalUnion S;
        for (const auto& piece : array_from(set, "sweep set")) {
          if (!piece.is_array() || piece.size() != 2) fail(ErrorKind::Parse, "sweep piece must be [lo, hi]");
          S.add({rational_from(piece[0], "piece"), rational_from(piece[1], "piece")});
        }
        c.sweep_sets.push_back(S);
      }
      s.chains.push_back(std::move(c));
    }
    p.steps.push_back(std::move(s));
  }
  return p;
}

Json to_json(const DefeatVerdict& v) {
  Json j;
  j["member"] = v.member;
  j["verdict"] = v.feasible ? "FEASIBLE" : "INFEASIBLE";
  j["domain_depth"] = v.domain_depth;
  j["codomain_depth"] = v.codomain_depth;
  j["decider"] = to_json(v.result);
  return j;
}

GluedSpace glued_space_from(const Json& j) {
  const Json& sheets = field(j, "sheets", "glued space");
  if (!sheets.is_object()) fail(ErrorKind::Parse, "glued space: sheets must be an object");
  std::map<std::string, GapStructure> m;
  for (const auto& [id, sj] : sheets.items()) {
    auto en = RationalEnumeration::from_name(sj.value("enumeration", std::string("denominator-numerator")));
    m.emplace(id, build_gaps(gamma_from(field(sj, "gamma", "sheet " + id)), en,
                             int_from(field(sj, "depth", "sheet " + id), "sheet depth")));
  }
  return GluedSpace(std::move(m));
}

GluedPoint glued_point_from(const Json& j) {
  std::string tag = string_from(field(j, "tag", "glued point"), "glued point tag");
  if (tag == "base0") return GluedPoint::base0();
  if (tag == "base1") return GluedPoint::base1();
  if (tag == "inner")
    return GluedPoint::inner(string_from(field(j, "sheet", "glued point"), "sheet"),
                             rational_from(field(j, "x", "glued point"), "glued point x"));
  fail(ErrorKind::Parse, "glued point tag must be base0, base1 or inner");
}

Json to_json(const GluedPoint& p) {
  Json j;
  switch (p.tag) {
    case GluedPoint::Tag::Base0: j["tag"] = "base0"; break;
    case GluedPoint::Tag::Base1: j["tag"] = "base1"; break;
    case GluedPoint::Tag::Inner:
      j["tag"] = "inner";
      j["sheet"] = p.sheet;
      j["x"] = p.x.str();
      break;
  }
  return j;
}

SheetSpec sheet_spec_from(const Json& j) {
  return SheetSpec(rationals_from(j.is_object() ? field(j, "gamma", "sheet") : j, "sheet gamma"));
}

Json to_json(const SheetSpec& s) { return Json{{"gamma", to_json(s.gamma)}}; }

CubePoint cube_point_from(const Json& j) {
  std::string tag = string_from(field(j, "tag", "cube point"), "cube point tag");
  if (tag == "vertex") {
    std::vector<int> A;
    for (const auto& a : array_from(field(j, "A", "vertex"), "vertex A")) A.push_back(int_from(a, "vertex label"));
    return CubePoint::vertex(A);
  }
  if (tag == "inner")
    return CubePoint::inner(string_from(field(j, "sheet", "cube point"), "sheet"),
                            rationals_from(field(j, "coords", "cube point"), "coords"));
  fail(ErrorKind::Parse, "cube point tag must be vertex or inner");
}

Json to_json(const CubePoint& p) {
  Json j;
  if (p.tag == CubePoint::Tag::Vertex) {
    j["tag"] = "vertex";
    j["A"] = p.A;
  } else {
    j["tag"] = "inner";
    j["sheet"] = p.sheet;
    j["coords"] = to_json(p.coords);
  }
  return j;
}

Json to_json(const DefeatWitness& w) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["K"] = w.K.str();
  Json fam = Json::array();
  for (const auto& s : w.family) fam.push_back(to_json(s));
  j["family"] = fam;
  j["gamma_star"] = to_json(w.gamma_star);
  j["beta0"] = w.beta0;
  j["p_star"] = to_json(w.p_star);
  j["q_star"] = to_json(w.q_star);
  j["distance"] = w.distance.str();
  j["bound"] = w.bound.str();
  j["case1_holds"] = w.case1_holds;
  j["case2_holds"] = w.case2_holds;
  return j;
}

DefeatWitness witness_from(const Json& j) {
  std::vector<SheetSpec> fam;
  for (const auto& s : array_from(field(j, "family", "witness"), "witness.family")) fam.push_back(sheet_spec_from(s));
  std::optional<int> b0;
  if (j.contains("beta0")) b0 = int_from(j.at("beta0"), "witness.beta0");
  // rebuilt rather than trusted; a stored gamma* must agree
  DefeatWitness w = defeat_family(fam, rational_from(field(j, "K", "witness"), "witness.K"), b0);
  if (j.contains("gamma_star") && !(sheet_spec_from(j.at("gamma_star")) == w.gamma_star))
    fail(ErrorKind::Parse, "witness gamma* does not match its family and K");
  return w;
}

RetractionTable retraction_from(const Json& j) {
  RetractionTable t;
  for (const auto& e : array_from(j.is_object() ? field(j, "table", "retraction") : j, "retraction table")) {
    if (!e.is_array() || e.size() != 2) fail(ErrorKind::Parse, "retraction entries are [from, to] pairs");
    t.emplace_back(cube_point_from(e[0]), cube_point_from(e[1]));
  }
  return t;
}

Json to_json(const ViolationReport& r) {
  Json j;
  j["in_model"] = r.in_model;
  j["component_breaks"] = r.component_breaks;
  j["case"] = r.proof_case;
  j["beta0"] = r.beta0;
  j["lhs"] = r.lhs.str();
  j["rhs"] = r.rhs.str();
  j["chain_low"] = r.chain_low.str();
  j["chain_cap"] = r.chain_cap.str();
  j["violated"] = r.violated;
  j["inequality"] = r.inequality;
  return j;
}

FiniteMetricSpace metric_space_from(const Json& j) {
  std::vector<std::string> ids;
  for (const auto& id : array_from(field(j, "ids", "metric space"), "ids")) ids.push_back(string_from(id, "id"));
  std::vector<std::vector<Rational>> d;
  for (const auto& row : array_from(field(j, "dist", "metric space"), "dist")) d.push_back(rationals_from(row, "dist row"));
  int base = 0;
  if (j.contains("base")) {
    auto b = string_from(j.at("base"), "base");
    auto it = std::find(ids.begin(), ids.end(), b);
    if (it == ids.end()) fail(ErrorKind::Parse, "base id '" + b + "' not among ids");
    base = static_cast<int>(it - ids.begin());
  }
  return FiniteMetricSpace(ids, d, base);
}

FiniteMetricSpace metric_space_from_csv(const std::string& text, const std::string& base) {
  std::istringstream in(text);
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) {
      cell.erase(0, cell.find_first_not_of(" \t\r"));
      cell.erase(cell.find_last_not_of(" \t\r") + 1);
      out.push_back(cell);
    }
    return out;
  };
  if (!std::getline(in, line)) fail(ErrorKind::Parse, "metric csv: empty input");
  auto header = split(line);
  if (header.size() < 2) fail(ErrorKind::Parse, "metric csv: header needs ids");
  std::vector<std::string> ids(header.begin() + 1, header.end());
  std::vector<std::vector<Rational>> d;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split(line);
    if (cells.size() != header.size()) fail(ErrorKind::Parse, "metric csv: ragged row");
    if (cells[0] != ids[d.size()]) fail(ErrorKind::Parse, "metric csv: row ids must follow the header order");
    std::vector<Rational> row;
    for (std::size_t c = 1; c < cells.size(); ++c) row.push_back(rational_from(Json(cells[c]), "metric csv cell"));
    d.push_back(std::move(row));
    if (d.size() > ids.size()) fail(ErrorKind::Parse, "metric csv: too many rows");
  }
  int b = 0;
  if (!base.empty()) {
    auto it = std::find(ids.begin(), ids.end(), base);
    if (it == ids.end()) fail(ErrorKind::Parse, "base id '" + base + "' not among ids");
    b = static_cast<int>(it - ids.begin());
  }
  return FiniteMetricSpace(ids, d, b);
}

Json to_json(const FiniteMetricSpace& M) {
  Json j;
  j["ids"] = M.ids();
  j["base"] = M.id(M.base());
  Json d = Json::array();
  for (int i = 0; i < M.size(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < M.size(); ++k) row.push_back(M.d(i, k).str());
    d.push_back(row);
  }
  j["dist"] = d;
  return j;
}

std::vector<int> ids_from(const FiniteMetricSpace& M, const Json& j) {
  std::vector<int> out;
  for (const auto& e : array_from(j, "id list")) out.push_back(M.index_of(string_from(e, "id")));
  return out;
}

Json ids_json(const FiniteMetricSpace& M, const std::vector<int>& pts) {
  Json a = Json::array();
  for (int p : pts) a.push_back(M.id(p));
  return a;
}

Json to_json(const FiniteMetricSpace& M, const NetResult& n) {
  Json j;
  j["F"] = ids_json(M, n.F);
  j["k"] = n.k;
  j["eps"] = n.eps.str();
  j["radius"] = n.radius.str();
  j["candidates"] = n.candidates;
  Json centers = Json::array();
  for (const auto& c : n.centers) centers.push_back(ids_json(M, c));
  j["centers"] = centers;
  j["Z"] = ids_json(M, n.Z);
  return j;
}

Json to_json(const FiniteMetricSpace& M, const SeparatedChain& c) {
  Json j;
  Json F = Json::array(), D = Json::array();
  for (const auto& f : c.F_chain) F.push_back(ids_json(M, f));
  for (const auto& d : c.D_chain) D.push_back(ids_json(M, d));
  j["F_chain"] = F;
  j["eps_chain"] = to_json(c.eps_chain);
  j["D_chain"] = D;
  return j;
}

SeparatedChain chain_from(const FiniteMetricSpace& M, const Json& j) {
  SeparatedChain c;
  for (const auto& f : array_from(field(j, "F_chain", "chain"), "F_chain")) {
    auto v = ids_from(M, f);
    std::sort(v.begin(), v.end());
    c.F_chain.push_back(v);
  }
  c.eps_chain = rationals_from(field(j, "eps_chain", "chain"), "eps_chain");
  for (const auto& d : array_from(field(j, "D_chain", "chain"), "D_chain")) {
    auto v = ids_from(M, d);
    std::sort(v.begin(), v.end());
    c.D_chain.push_back(v);
  }
  return c;
}

Json to_json(const FiniteMetricSpace& M, const ExtensionOperator& T) {
  Json j;
  j["p_sequence"] = ids_json(M, T.p_sequence);
  Json levels = Json::array();
  for (std::size_t n = 0; n < T.F_chain.size(); ++n) {
    Json l;
    l["n"] = n + 1;
    l["F"] = ids_json(M, T.F_chain[n]);
    l["theta"] = T.theta[n].str();
    l["eps"] = T.eps[n].str();
    l["radius"] = T.radius[n].str();
    l["R"] = T.R[n].str();
    l["S"] = ids_json(M, T.S_chain[n + 1]);
    levels.push_back(l);
  }
  j["levels"] = levels;
  j["separated_chain"] = to_json(M, T.D);
  j["E_max"] = ids_json(M, T.E_max);
  j["unique_maximum"] = T.unique_maximum;
  Json assign = Json::object();
  for (int p = 0; p < M.size(); ++p) assign[M.id(p)] = M.id(T.assignment[p]);
  j["assignment"] = assign;
  j["map_lipschitz"] = T.map_lipschitz.str();
  j["certificate"] = T.certificate.str();
  return j;
}

}  // namespace lipgap
