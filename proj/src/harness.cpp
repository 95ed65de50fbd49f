#include "lipgap/harness.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "lipgap/parallel.hpp"

namespace lipgap {

namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::Precondition:
    case ErrorKind::UnknownSheet:
    case ErrorKind::TableIncomplete:
    case ErrorKind::ChainMismatch: return kExitInput;
    case ErrorKind::Guard:
    case ErrorKind::HorizonExhausted:
    case ErrorKind::DepthInsufficient: return kExitGuard;
    default: return kExitInternal;
  }
}

const std::string& Scenario::kind() const { return doc.at("kind").get_ref<const std::string&>(); }

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Parse, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Parse, "cannot write " + tmp.string());
    out << text;
    if (!out.flush()) fail(ErrorKind::Parse, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

namespace {

const std::set<std::string> kKinds{"build-gaps", "decide-lip", "make-adversary", "verify-adversary",
                                   "cube-defeat", "cube-check", "glue-dist", "collapse",
                                   "net", "chain", "extend"};

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::Parse, what + ": " + e.what());
  }
}

}  // namespace

Scenario load_scenario(const Json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) fail(ErrorKind::Parse, "scenario must be a JSON object");
  if (!doc.contains("kind") || !doc.at("kind").is_string()) fail(ErrorKind::Parse, "scenario needs a \"kind\"");
  if (!kKinds.count(doc.at("kind").get<std::string>()))
    fail(ErrorKind::Parse, "unknown scenario kind '" + doc.at("kind").get<std::string>() + "'");
  Json out;
  out["schema_version"] = kSchemaVersion;
  out["kind"] = doc.at("kind");
  if (doc.contains("name")) out["name"] = doc.at("name");
  Json inputs = Json::object();
  if (doc.contains("inputs")) {
    if (!doc.at("inputs").is_object()) fail(ErrorKind::Parse, "scenario inputs must be an object");
    for (const auto& [name, v] : doc.at("inputs").items()) {
      if (!v.is_string()) {
        inputs[name] = v;
        continue;
      }
      fs::path p = fs::path(v.get<std::string>());
      if (p.is_relative()) p = base_dir / p;
      std::string text = read_text(p);
      if (p.extension() == ".csv") inputs[name] = Json{{"csv", text}};
      else inputs[name] = parse_json(text, p.string());
    }
  }
  out["inputs"] = inputs;
  out["params"] = doc.value("params", Json::object());
  if (!out["params"].is_object()) fail(ErrorKind::Parse, "scenario params must be an object");
  out["seed"] = doc.value("seed", 0);
  if (!out["seed"].is_number_integer()) fail(ErrorKind::Parse, "seed must be an integer");
  if (doc.contains("expect")) out["expect"] = doc.at("expect");
  return Scenario{out};
}

Scenario load_scenario_file(const fs::path& path) {
  return load_scenario(parse_json(read_text(path), path.string()), path.parent_path());
}

namespace {

struct Ctx {
  const Json& inputs;
  const Json& params;
  const Json& expect;
  std::uint64_t seed;

  const Json& input(const char* name) const {
    if (!inputs.contains(name)) fail(ErrorKind::Parse, std::string("missing input \"") + name + "\"");
    return inputs.at(name);
  }
  bool has(const char* key) const { return params.contains(key); }
  Rational rational(const char* key) const {
    if (!params.contains(key)) fail(ErrorKind::Parse, std::string("missing parameter \"") + key + "\"");
    return rational_from(params.at(key), key);
  }
  Rational rational(const char* key, const Rational& dflt) const { return has(key) ? rational(key) : dflt; }
  int integer(const char* key) const {
    if (!params.contains(key) || !params.at(key).is_number_integer())
      fail(ErrorKind::Parse, std::string("parameter \"") + key + "\" must be an integer");
    return params.at(key).get<int>();
  }
  int integer(const char* key, int dflt) const { return has(key) ? integer(key) : dflt; }
  std::string text(const char* key, const std::string& dflt) const {
    if (!has(key)) return dflt;
    if (!params.at(key).is_string()) fail(ErrorKind::Parse, std::string("parameter \"") + key + "\" must be a string");
    return params.at(key).get<std::string>();
  }
  bool flag(const char* key, bool dflt) const {
    if (!has(key)) return dflt;
    if (!params.at(key).is_boolean()) fail(ErrorKind::Parse, std::string("parameter \"") + key + "\" must be a boolean");
    return params.at(key).get<bool>();
  }
  BuildOptions build() const {
    BuildOptions b;
    if (has("horizon")) b.horizon = static_cast<std::uint64_t>(integer("horizon"));
    return b;
  }
  RationalEnumeration enumeration() const {
    return RationalEnumeration::from_name(text("enumeration", "denominator-numerator"));
  }
};

struct Outcome {
  Json verdicts = Json::object();
  Json transcripts = Json::object();
  bool falsified = false;
  std::string falsified_reason;
};

// a certificate produced by another scenario may be passed where its payload is expected
const Json& unwrap(const Json& j, const char* transcript) {
  if (j.is_object() && j.contains("transcripts") && j.at("transcripts").contains(transcript))
    return j.at("transcripts").at(transcript);
  return j;
}

Outcome run_build_gaps(const Ctx& c) {
  Outcome o;
  auto gs = build_gaps(gamma_from(c.input("gamma")), c.enumeration(), c.integer("depth"), c.build());
  validate_gap_structure(gs);
  o.verdicts["valid"] = true;
  o.verdicts["nonempty_gaps"] = gs.gaps().size();
  o.verdicts["complement_measure"] = gs.gap_set().complement_measure().str();
  o.verdicts["complement_measure_bound"] = complement_measure_bound(gs).str();
  o.transcripts["gap_structure"] = to_json(gs);
  return o;
}

void expect_verdict(const Ctx& c, Outcome& o, const std::string& actual) {
  if (c.expect.is_object() && c.expect.contains("verdict") && c.expect.at("verdict") != actual) {
    o.falsified = true;
    o.falsified_reason = "expected " + c.expect.at("verdict").dump() + ", got \"" + actual + "\"";
  }
}

Outcome run_decide_lip(const Ctx& c) {
  Outcome o;
  auto en = c.enumeration();
  int depth = c.integer("depth", 8);
  auto dom = build_gaps(gamma_from(c.input("domain")), en, c.integer("depth_domain", depth), c.build());
  auto cod = build_gaps(gamma_from(c.input("codomain")), en, c.integer("depth_codomain", depth), c.build());
  auto res = max_feasible_map(dom, cod, c.rational("K"));
  std::string verdict = res.feasible ? "FEASIBLE" : "INFEASIBLE";
  o.verdicts["verdict"] = verdict;
  o.verdicts["terminal_value"] = res.terminal_value.str();
  o.transcripts["decider"] = to_json(res);
  if (res.feasible) {
    Json certs = Json::array();
    for (const auto& jc : jump_certificates(res.max_map, dom.gap_set(), cod.gap_set())) certs.push_back(to_json(jc));
    o.transcripts["jump_certificates"] = certs;
  }
  expect_verdict(c, o, verdict);
  return o;
}

std::vector<GammaSequence> family_from(const Json& j, Rational& eps0) {
  const Json& members = j.is_object() ? j.at("members") : j;
  if (!members.is_array() || members.empty()) fail(ErrorKind::Parse, "family needs a nonempty member list");
  std::vector<GammaSequence> fam;
  for (const auto& m : members) fam.push_back(gamma_from(m));
  eps0 = j.is_object() && j.contains("eps0") ? rational_from(j.at("eps0"), "family.eps0") : fam.front().eps0();
  return fam;
}

AdversaryOptions adversary_options(const Ctx& c) {
  AdversaryOptions opts;
  opts.initial_depth = c.integer("initial_depth", opts.initial_depth);
  opts.depth_cap = c.integer("depth_cap", opts.depth_cap);
  opts.max_halvings = c.integer("max_halvings", opts.max_halvings);
  opts.threads = default_parallelism();
  opts.build = c.build();
  return opts;
}

Outcome run_make_adversary(const Ctx& c) {
  Outcome o;
  Rational eps0;
  auto fam = family_from(c.input("family"), eps0);
  auto p = construct_gamma_star(fam, c.rational("K"), eps0, c.enumeration(), adversary_options(c));
  auto bad = audit_prefix(p, c.build());
  o.verdicts["audit_ok"] = bad.empty();
  o.verdicts["violations"] = bad;
  o.verdicts["gamma_star"] = to_json(p.gamma_star);
  Json nom = Json::array();
  for (int m = 1; m <= static_cast<int>(fam.size()); ++m) nom.push_back(p.n_omega_for(m));
  o.verdicts["n_omega"] = nom;
  o.transcripts["prefix"] = to_json(p);
  if (!bad.empty()) {
    o.falsified = true;
    o.falsified_reason = "prefix audit failed: " + bad.front();
  }
  return o;
}

Outcome run_verify_adversary(const Ctx& c) {
  Outcome o;
  AdversaryPrefix p;
  if (c.inputs.contains("prefix")) {
    p = prefix_from(unwrap(c.input("prefix"), "prefix"));
  } else {
    Rational eps0;
    auto fam = family_from(c.input("family"), eps0);
    p = construct_gamma_star(fam, c.rational("K"), eps0, RationalEnumeration::from_name(c.text("enumeration", "denominator-numerator")),
                             adversary_options(c));
  }
  const int N = static_cast<int>(p.gamma_star.size());
  GeometricTail tail{c.rational("tail_ratio", Rational(1, 2))};
  if (c.has("sabotage_member")) {
    int m = c.integer("sabotage_member");
    p = sabotage_with_member(p, m);
    if (!c.has("tail_ratio") && p.family.at(m - 1).tail_rule()) tail = *p.family[m - 1].tail_rule();
    o.verdicts["sabotaged_with_member"] = m;
  }
  int need = N;
  for (int m = 1; m <= N; ++m) need = std::max(need, p.n_omega_for(m));
  int dd = c.integer("depth_domain", need), dc = c.integer("depth_codomain", need);
  auto verdicts = verify_prefix_defeat(p, tail, dd, dc, c.build());
  Json per = Json::array(), runs = Json::array();
  bool all_infeasible = true;
  for (const auto& v : verdicts) {
    per.push_back(Json{{"member", v.member}, {"verdict", v.feasible ? "FEASIBLE" : "INFEASIBLE"}});
    runs.push_back(to_json(v));
    all_infeasible &= !v.feasible;
  }
  o.verdicts["members"] = per;
  o.verdicts["all_infeasible"] = all_infeasible;
  o.verdicts["depth_domain"] = dd;
  o.verdicts["depth_codomain"] = dc;
  o.transcripts["gamma_star"] = to_json(p.gamma_star);
  o.transcripts["tail_ratio"] = tail.ratio.str();
  o.transcripts["verdicts"] = runs;
  bool want = !c.expect.is_object() || c.expect.value("all_infeasible", true);
  if (all_infeasible != want) {
    o.falsified = true;
    o.falsified_reason = all_infeasible ? "expected a FEASIBLE member" : "some member admits a K-Lipschitz map";
  }
  return o;
}

std::vector<SheetSpec> sheets_from(const Json& j) {
  const Json& arr = j.is_object() ? j.at("sheets") : j;
  if (!arr.is_array() || arr.empty()) fail(ErrorKind::Parse, "cube family needs a nonempty sheet list");
  std::vector<SheetSpec> out;
  for (const auto& s : arr) out.push_back(sheet_spec_from(s));
  return out;
}

Outcome run_cube_defeat(const Ctx& c) {
  Outcome o;
  auto fam = sheets_from(c.input("family"));
  std::optional<int> b0;
  if (c.has("beta0")) b0 = c.integer("beta0");
  auto w = defeat_family(fam, c.rational("K"), b0);
  o.verdicts["gamma_star"] = to_json(w.gamma_star.gamma);
  o.verdicts["beta0"] = w.beta0;
  o.verdicts["distance"] = w.distance.str();
  o.verdicts["bound"] = w.bound.str();
  o.verdicts["case1_holds"] = w.case1_holds;
  o.verdicts["case2_holds"] = w.case2_holds;
  o.transcripts["witness"] = to_json(w);
  if (c.has("K_grid")) {
    Json grid = Json::array();
    for (const auto& k : rationals_from(c.params.at("K_grid"), "K_grid")) {
      auto wk = defeat_family(fam, k, b0);
      grid.push_back(Json{{"K", k.str()},
                          {"beta0", wk.beta0},
                          {"gamma_star_beta0", wk.gamma_star.gamma[wk.beta0 - 1].str()},
                          {"distance", wk.distance.str()}});
    }
    o.transcripts["grid"] = grid;
  }
  if (!w.case1_holds || !w.case2_holds) {
    o.falsified = true;
    o.falsified_reason = "a case inequality of the witness fails";
  }
  return o;
}

Outcome run_cube_check(const Ctx& c) {
  Outcome o;
  DefeatWitness w = witness_from(unwrap(c.input("witness"), "witness"));
  Rational K = c.rational("K", w.K);
  RetractionTable R;
  if (c.inputs.contains("retraction")) {
    R = retraction_from(c.input("retraction"));
    o.verdicts["retraction"] = "table";
  } else {
    std::vector<CubePoint> pts{w.p_star, CubePoint::vertex({})};
    for (int b = 1; b <= w.gamma_star.lambda(); ++b) {
      pts.push_back(w.q_star_for(b));
      pts.push_back(CubePoint::vertex({b}));
    }
    R = nearest_point_retraction(pts, w);
    o.verdicts["retraction"] = "nearest-point";
  }
  auto rep = check_retraction_violation(R, K, w);
  o.verdicts["report"] = to_json(rep);
  o.verdicts["verdict"] = !rep.in_model ? "OUT_OF_MODEL" : (rep.violated ? "VIOLATED" : "NOT_VIOLATED");
  Json table = Json::array();
  for (const auto& [from, to] : R) table.push_back(Json::array({to_json(from), to_json(to)}));
  o.transcripts["retraction_table"] = table;
  if (rep.in_model && !rep.violated) {
    o.falsified = true;
    o.falsified_reason = "in-model retraction without a violated inequality";
  }
  expect_verdict(c, o, o.verdicts["verdict"].get<std::string>());
  return o;
}

Outcome run_glue_dist(const Ctx& c) {
  Outcome o;
  auto sp = glued_space_from(c.input("space"));
  if (!c.has("p") || !c.has("q")) fail(ErrorKind::Parse, "glue-dist needs parameters p and q");
  auto p = glued_point_from(c.params.at("p")), q = glued_point_from(c.params.at("q"));
  o.verdicts["distance"] = glued_distance(p, q, sp).str();
  return o;
}

Outcome run_collapse(const Ctx& c) {
  Outcome o;
  auto sp = glued_space_from(c.input("space"));
  std::vector<CollapseEntry> table;
  for (const auto& e : c.input("table")) {
    if (!e.is_array() || e.size() != 2) fail(ErrorKind::Parse, "collapse table entries are [x, point]");
    table.push_back({rational_from(e[0], "collapse x"), glued_point_from(e[1])});
  }
  auto out = collapse_map(table, c.rational("K"), c.text("domain_sheet", "star"), sp);
  if (auto* acc = std::get_if<CollapseResult>(&out)) {
    const auto& r0 = *acc;
    o.verdicts["verdict"] = "ACCEPTED";
    o.verdicts["P"] = r0.P.str();
    o.verdicts["Q"] = r0.Q.str();
    o.verdicts["n0"] = r0.n0;
    Json rows = Json::array();
    for (const auto& [x, y] : r0.f0) rows.push_back(Json::array({x.str(), y.str()}));
    o.transcripts["f0"] = rows;
  } else {
    const auto& r = std::get<CollapseRejection>(out);
    o.verdicts["verdict"] = "REJECTED";
    o.verdicts["witness"] = Json{{"x", r.x.str()}, {"y", r.y.str()}, {"lhs", r.lhs.str()}, {"rhs", r.rhs.str()}};
  }
  expect_verdict(c, o, o.verdicts["verdict"].get<std::string>());
  return o;
}

FiniteMetricSpace metric_from(const Json& j, const Ctx& c) {
  if (j.is_object() && j.contains("csv")) return metric_space_from_csv(j.at("csv").get<std::string>(), c.text("base", ""));
  return metric_space_from(j);
}

Outcome run_net(const Ctx& c) {
  Outcome o;
  auto M = metric_from(c.input("space"), c);
  if (!c.has("F")) fail(ErrorKind::Parse, "net needs parameter F");
  auto F = ids_from(M, c.params.at("F"));
  NetOptions opts;
  if (c.has("max_candidates")) opts.max_candidates = static_cast<std::uint64_t>(c.integer("max_candidates"));
  auto net = finite_net(M, F, c.integer("k"), c.rational("eps"), opts);
  o.transcripts["net"] = to_json(M, net);
  o.verdicts["Z_size"] = net.Z.size();
  o.verdicts["centers"] = net.centers.size();
  if (c.flag("audit", true)) {
    Rational worst = 0;
    std::uint64_t checked = 0;
    for (const auto& E : admissible_sets(M, net, opts)) {
      worst = std::max(worst, local_map(M, E, net).lip);
      ++checked;
    }
    bool ok = worst <= Rational(1) + net.eps;
    o.verdicts["sets_checked"] = checked;
    o.verdicts["max_local_lipschitz"] = worst.str();
    o.verdicts["all_within_1_plus_eps"] = ok;
    if (!ok) {
      o.falsified = true;
      o.falsified_reason = "a local map exceeds 1 + eps";
    }
  }
  return o;
}

Outcome run_chain(const Ctx& c) {
  Outcome o;
  auto M = metric_from(c.input("space"), c);
  if (!c.has("F_chain") || !c.params.at("F_chain").is_array()) fail(ErrorKind::Parse, "chain needs F_chain");
  std::vector<std::vector<int>> Fs;
  for (const auto& f : c.params.at("F_chain")) Fs.push_back(ids_from(M, f));
  auto chain = separated_chain(M, Fs, rationals_from(c.params.at("eps_chain"), "eps_chain"));
  auto bad = audit_separated_chain(M, chain);
  o.verdicts["audit_ok"] = bad.empty();
  o.verdicts["violations"] = bad;
  o.transcripts["chain"] = to_json(M, chain);
  if (!bad.empty()) {
    o.falsified = true;
    o.falsified_reason = bad.front();
  }
  return o;
}

// 1-Lipschitz values on S, vanishing at the base, drawn point by point inside the
// interval the values so far allow; zero off S.
FunctionTable random_function_on(const FiniteMetricSpace& M, const std::vector<int>& S, std::mt19937_64& rng) {
  FunctionTable f(M.size(), Rational(0));
  std::vector<int> done{M.base()};
  for (int p : S) {
    if (p == M.base()) continue;
    std::optional<Rational> lo, hi;
    for (int q : done) {
      Rational a = f[q] - M.d(p, q), b = f[q] + M.d(p, q);
      if (!lo || a > *lo) lo = a;
      if (!hi || b < *hi) hi = b;
    }
    f[p] = *lo + (*hi - *lo) * Rational(static_cast<long long>(rng() % 9), 8);
    done.push_back(p);
  }
  return f;
}

Outcome run_extend(const Ctx& c) {
  Outcome o;
  auto M = metric_from(c.input("space"), c);
  if (!c.has("sequence")) fail(ErrorKind::Parse, "extend needs parameter sequence");
  std::optional<SeparatedChain> D;
  if (c.inputs.contains("chain")) D = chain_from(M, unwrap(c.input("chain"), "chain"));
  NetOptions opts;
  if (c.has("max_candidates")) opts.max_candidates = static_cast<std::uint64_t>(c.integer("max_candidates"));
  auto T = extension_operator(M, ids_from(M, c.params.at("sequence")), D, opts);
  o.transcripts["operator"] = to_json(M, T);
  o.verdicts["certificate"] = T.certificate.str();
  o.verdicts["map_lipschitz"] = T.map_lipschitz.str();
  o.verdicts["unique_maximum"] = T.unique_maximum;

  const auto S = T.S_union();
  std::mt19937_64 rng(c.seed);
  int trials = c.integer("random_functions", 0);
  bool linear = true, extends = true, bounded = true;
  std::vector<FunctionTable> fs;
  for (int t = 0; t < trials; ++t) fs.push_back(random_function_on(M, S, rng));
  if (c.inputs.contains("function")) {
    FunctionTable f(M.size(), Rational(0));
    for (const auto& [id, v] : c.input("function").items()) f[M.index_of(id)] = rational_from(v, "function value");
    fs.push_back(f);
    Json tf = Json::object();
    auto out = T.apply(f);
    for (int p = 0; p < M.size(); ++p) tf[M.id(p)] = out[p].str();
    o.transcripts["Tf"] = tf;
  }
  for (std::size_t t = 0; t < fs.size(); ++t) {
    const auto& f = fs[t];
    auto Tf = T.apply(f);
    std::map<int, Rational> onS, onE;
    for (int p : S) onS[p] = f[p];
    for (int p : T.E_max) onE[p] = Tf[p];
    bounded &= lipschitz_constant(M, onE) <= T.certificate * lipschitz_constant(M, onS);
    for (std::size_t n = 0; n + 1 < T.S_chain.size(); ++n)
      for (int p : T.S_chain[n]) extends &= Tf[p] == f[p];
    const auto& g = fs[(t + 1) % fs.size()];
    FunctionTable mix(M.size());
    for (int p = 0; p < M.size(); ++p) mix[p] = Rational(2) * f[p] - Rational(1, 3) * g[p];
    auto Tmix = T.apply(mix), Tg = T.apply(g);
    for (int p = 0; p < M.size(); ++p) linear &= Tmix[p] == Rational(2) * Tf[p] - Rational(1, 3) * Tg[p];
  }
  o.verdicts["functions_checked"] = fs.size();
  o.verdicts["linear"] = linear;
  o.verdicts["extends_on_S_0_to_S_N-1"] = extends;
  o.verdicts["norm_within_certificate"] = bounded;
  if (!(linear && extends && bounded)) {
    o.falsified = true;
    o.falsified_reason = "extension operator check failed";
  }
  return o;
}

Outcome dispatch(const std::string& kind, const Ctx& c) {
  if (kind == "build-gaps") return run_build_gaps(c);
  if (kind == "decide-lip") return run_decide_lip(c);
  if (kind == "make-adversary") return run_make_adversary(c);
  if (kind == "verify-adversary") return run_verify_adversary(c);
  if (kind == "cube-defeat") return run_cube_defeat(c);
  if (kind == "cube-check") return run_cube_check(c);
  if (kind == "glue-dist") return run_glue_dist(c);
  if (kind == "collapse") return run_collapse(c);
  if (kind == "net") return run_net(c);
  if (kind == "chain") return run_chain(c);
  if (kind == "extend") return run_extend(c);
  fail(ErrorKind::Parse, "unknown scenario kind '" + kind + "'");
}

}  // namespace

Certificate run_scenario(const Scenario& s) {
  auto t0 = std::chrono::steady_clock::now();
  Certificate cert;
  Json& j = cert.doc;
  j["schema_version"] = kSchemaVersion;
  j["tool"] = "lipgap";
  j["tool_version"] = kToolVersion;
  j["scenario"] = s.doc;
  j["seed"] = s.doc.value("seed", 0);
  static const Json kNone = Json::object();
  try {
    Ctx c{s.doc.at("inputs"), s.doc.at("params"), s.doc.contains("expect") ? s.doc.at("expect") : kNone,
          s.doc.value("seed", std::uint64_t{0})};
    Outcome o = dispatch(s.kind(), c);
    j["status"] = o.falsified ? "falsified" : "ok";
    if (o.falsified) j["falsified"] = o.falsified_reason;
    j["verdicts"] = std::move(o.verdicts);
    j["transcripts"] = std::move(o.transcripts);
    cert.exit_code = o.falsified ? kExitFalsified : kExitOk;
  } catch (const Error& e) {
    j["status"] = "error";
    j["error"] = Json{{"kind", error_kind_name(e.kind())}, {"message", e.what()}};
    cert.exit_code = exit_code_for(e.kind());
  } catch (const std::exception& e) {
    j["status"] = "error";
    j["error"] = Json{{"kind", "internal"}, {"message", e.what()}};
    cert.exit_code = kExitInternal;
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  j["wall_clock_ms"] = ms;
  return cert;
}

std::string certificate_text(const Json& cert) { return cert.dump(2) + "\n"; }

std::string stable_text(const Json& cert) {
  Json c = cert;
  c.erase("wall_clock_ms");
  return c.dump(2) + "\n";
}

namespace {

std::string csv_rational(const Json& v) {
  Rational r = rational_from(v, "csv value");
  return r.str() + "," + r.decimal(12);
}

const Json& need(const Json& cert, const char* transcript, const std::string& selector) {
  if (!cert.contains("transcripts") || !cert.at("transcripts").contains(transcript))
    fail(ErrorKind::Precondition, "certificate has no series for selector '" + selector + "'");
  return cert.at("transcripts").at(transcript);
}

std::vector<std::pair<std::string, const Json*>> decider_runs(const Json& cert, const std::string& selector) {
  std::vector<std::pair<std::string, const Json*>> runs;
  if (cert.contains("transcripts") && cert.at("transcripts").contains("decider")) {
    runs.emplace_back("decider", &cert.at("transcripts").at("decider"));
  } else {
    for (const auto& v : need(cert, "verdicts", selector))
      runs.emplace_back("member" + std::to_string(v.at("member").get<int>()), &v.at("decider"));
  }
  return runs;
}

}  // namespace

std::string emit_csv(const Json& cert, const std::string& selector) {
  std::ostringstream out;
  if (selector == "blocking-chain") {
    out << "series,index,value,value_decimal\n";
    for (const auto& [name, d] : decider_runs(cert, selector)) {
      int i = 0;
      for (const auto& v : d->at("blocking_chain")) out << name << ',' << ++i << ',' << csv_rational(v) << '\n';
    }
  } else if (selector == "breakpoints") {
    out << "series,x,x_decimal,y,y_decimal\n";
    for (const auto& [name, d] : decider_runs(cert, selector))
      for (const auto& b : d->at("breakpoints")) out << name << ',' << csv_rational(b[0]) << ',' << csv_rational(b[1]) << '\n';
  } else if (selector == "defeat-grid") {
    out << "K,K_decimal,beta0,gamma_star_beta0,gamma_star_beta0_decimal,distance,distance_decimal\n";
    for (const auto& row : need(cert, "grid", selector))
      out << csv_rational(row.at("K")) << ',' << row.at("beta0").get<int>() << ','
          << csv_rational(row.at("gamma_star_beta0")) << ',' << csv_rational(row.at("distance")) << '\n';
  } else if (selector == "gaps") {
    out << "source_index,enumeration_index,left,left_decimal,right,right_decimal,length,length_decimal\n";
    for (const auto& g : need(cert, "gap_structure", selector).at("placements")) {
      if (g.at("empty").get<bool>()) continue;
      out << g.at("source_index").get<int>() << ',' << g.at("enumeration_index").get<std::uint64_t>() << ','
          << csv_rational(g.at("left")) << ',' << csv_rational(g.at("right")) << ',' << csv_rational(g.at("length"))
          << '\n';
    }
  } else {
    fail(ErrorKind::Parse, "unknown csv selector '" + selector + "' (blocking-chain, breakpoints, defeat-grid, gaps)");
  }
  return out.str();
}

}  // namespace lipgap
