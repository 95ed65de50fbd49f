#include "lipgap/vertex_cube.hpp"

#include <algorithm>
#include <limits>

#include "lipgap/errors.hpp"

namespace lipgap {

namespace {

const Rational kHalf(1, 2);

bool is_01(const Rational& x) { return x == Rational(0) || x == Rational(1); }

std::vector<Rational> vertex_position(const std::vector<int>& A, int lambda) {
  std::vector<Rational> v(lambda, Rational(0));
  for (int a : A) v[a - 1] = Rational(1);
  return v;
}

}  // namespace

SheetSpec::SheetSpec(std::vector<Rational> g) : gamma(std::move(g)) {
  require(!gamma.empty(), "sheet needs at least one coordinate");
  for (const auto& x : gamma) require(Rational(0) < x && x < kHalf, "sheet gamma entries must lie in (0, 1/2)");
}

CubePoint CubePoint::vertex(std::vector<int> A) {
  std::sort(A.begin(), A.end());
  A.erase(std::unique(A.begin(), A.end()), A.end());
  CubePoint p;
  p.A = std::move(A);
  return p;
}

CubePoint CubePoint::inner(std::string sheet, std::vector<Rational> coords) {
  CubePoint p;
  p.tag = Tag::Inner;
  p.sheet = std::move(sheet);
  p.coords = std::move(coords);
  return p;
}

CubePoint CubePoint::make(std::string sheet, std::vector<Rational> coords) {
  if (std::all_of(coords.begin(), coords.end(), is_01)) {
    std::vector<int> A;
    for (std::size_t a = 0; a < coords.size(); ++a)
      if (coords[a] == Rational(1)) A.push_back(static_cast<int>(a) + 1);
    return vertex(std::move(A));
  }
  return inner(std::move(sheet), std::move(coords));
}

std::vector<Rational> CubePoint::position(int lambda) const {
  return tag == Tag::Vertex ? vertex_position(A, lambda) : coords;
}

CubeSpace::CubeSpace(int lambda, std::map<std::string, SheetSpec> sheets) : lambda_(lambda), sheets_(std::move(sheets)) {
  require(lambda >= 1, "lambda must be positive");
  for (const auto& [id, s] : sheets_) require(s.lambda() == lambda, "dimension mismatch in sheet " + id);
}

const SheetSpec& CubeSpace::sheet(const std::string& id) const {
  auto it = sheets_.find(id);
  if (it == sheets_.end()) fail(ErrorKind::UnknownSheet, "unknown sheet '" + id + "'");
  return it->second;
}

void CubeSpace::validate(const CubePoint& p) const {
  if (p.tag == CubePoint::Tag::Vertex) {
    for (int a : p.A) require(a >= 1 && a <= lambda_, "vertex label out of range");
    return;
  }
  require(static_cast<int>(p.coords.size()) == lambda_, "dimension mismatch");
  require(membership(p.coords, sheet(p.sheet)), "point is not on sheet " + p.sheet);
  require(!std::all_of(p.coords.begin(), p.coords.end(), is_01), "inner point sits on a vertex");
}

bool membership(const std::vector<Rational>& p, const SheetSpec& sheet) {
  require(static_cast<int>(p.size()) == sheet.lambda(), "dimension mismatch");
  for (std::size_t a = 0; a < p.size(); ++a) {
    require(Rational(0) <= p[a] && p[a] <= Rational(1), "coordinate outside [0,1]");
    if (kHalf - sheet.gamma[a] < p[a] && p[a] < kHalf + sheet.gamma[a]) return false;
  }
  return true;
}

std::vector<int> component_of(const CubePoint& p) {
  if (p.tag == CubePoint::Tag::Vertex) return p.A;
  std::vector<int> A;
  for (std::size_t a = 0; a < p.coords.size(); ++a)
    if (p.coords[a] > kHalf) A.push_back(static_cast<int>(a) + 1);
  return A;
}

Rational sup_distance(const std::vector<Rational>& p, const std::vector<Rational>& q) {
  require(p.size() == q.size(), "dimension mismatch");
  Rational m = 0;
  for (std::size_t a = 0; a < p.size(); ++a) m = std::max(m, abs(p[a] - q[a]));
  return m;
}

namespace {

bool cross_sheet(const CubePoint& p, const CubePoint& q) {
  return p.tag == CubePoint::Tag::Inner && q.tag == CubePoint::Tag::Inner && p.sheet != q.sheet;
}

}  // namespace

// Each coordinate independently picks 0 or 1, costing (u, v) = distances of p
// and q to that choice. Fixing a cap t on max u, every coordinate takes the
// allowed choice with smaller v; the optimum is reached at t = its own max u.
Rational cube_distance(const CubePoint& p, const CubePoint& q, const CubeSpace& space) {
  space.validate(p);
  space.validate(q);
  const int L = space.lambda();
  auto a = p.position(L), b = q.position(L);
  if (!cross_sheet(p, q)) return sup_distance(a, b);
  std::vector<Rational> caps;
  for (int i = 0; i < L; ++i) {
    caps.push_back(a[i]);
    caps.push_back(Rational(1) - a[i]);
  }
  std::sort(caps.begin(), caps.end());
  caps.erase(std::unique(caps.begin(), caps.end()), caps.end());
  std::optional<Rational> best;
  for (const auto& t : caps) {
    Rational worst = 0;
    bool ok = true;
    for (int i = 0; i < L && ok; ++i) {
      std::optional<Rational> v;
      if (a[i] <= t) v = b[i];
      if (Rational(1) - a[i] <= t && (!v || Rational(1) - b[i] < *v)) v = Rational(1) - b[i];
      if (!v) ok = false;
      else worst = std::max(worst, *v);
    }
    if (ok && (!best || t + worst < *best)) best = t + worst;
  }
  ensure(best.has_value(), "cube distance search found no vertex");
  return *best;
}

Rational cube_distance_brute(const CubePoint& p, const CubePoint& q, const CubeSpace& space) {
  space.validate(p);
  space.validate(q);
  const int L = space.lambda();
  auto a = p.position(L), b = q.position(L);
  if (!cross_sheet(p, q)) return sup_distance(a, b);
  if (L > 20) fail(ErrorKind::Guard, "brute-force cube distance limited to 20 coordinates");
  std::optional<Rational> best;
  for (unsigned long mask = 0; mask < (1ul << L); ++mask) {
    std::vector<Rational> e(L);
    for (int i = 0; i < L; ++i) e[i] = (mask >> i) & 1 ? Rational(1) : Rational(0);
    Rational v = sup_distance(a, e) + sup_distance(e, b);
    if (!best || v < *best) best = v;
  }
  return *best;
}

std::string family_sheet_id(int beta) { return "f" + std::to_string(beta); }

CubeSpace DefeatWitness::space() const {
  std::map<std::string, SheetSpec> m;
  for (std::size_t b = 0; b < family.size(); ++b) m.emplace(family_sheet_id(static_cast<int>(b) + 1), family[b]);
  m.emplace("star", gamma_star);
  return CubeSpace(gamma_star.lambda(), std::move(m));
}

CubePoint DefeatWitness::q_star_for(int beta) const {
  require(beta >= 1 && beta <= gamma_star.lambda(), "beta out of range");
  auto c = p_star.coords;
  c[beta - 1] = kHalf + gamma_star.gamma[beta - 1];
  return CubePoint::inner("star", std::move(c));
}

DefeatWitness defeat_family(const std::vector<SheetSpec>& family, const Rational& K, std::optional<int> beta0) {
  const int L = static_cast<int>(family.size());
  require(L >= 1, "empty family");
  require(K >= Rational(1), "K must be at least 1");
  for (const auto& s : family) require(s.lambda() == L, "family size must equal lambda");

  std::vector<Rational> g;
  for (int a = 0; a < L; ++a) g.push_back(family[a].gamma[a] / (Rational(2) * K));
  int b0 = 1;
  for (int b = 2; b <= L; ++b)
    if (family[b - 1].gamma[b - 1] < family[b0 - 1].gamma[b0 - 1]) b0 = b;
  if (beta0) {
    require(*beta0 >= 1 && *beta0 <= L, "beta0 out of range");
    b0 = *beta0;
  }

  DefeatWitness w{K, family, SheetSpec(g), {}, {}, b0, {}, {}, false, false};
  for (int b = 0; b < L; ++b) ensure(g[b] < family[b].gamma[b], "gamma* meets a family member on the diagonal");
  std::vector<Rational> p;
  for (const auto& x : g) p.push_back(kHalf - x);
  w.p_star = CubePoint::inner("star", p);
  w.q_star = w.q_star_for(b0);
  const Rational& diag = family[b0 - 1].gamma[b0 - 1];
  w.bound = diag / K;
  w.distance = cube_distance(w.p_star, w.q_star, w.space());
  ensure(w.distance == Rational(2) * g[b0 - 1] && K * w.distance == diag, "defeat witness algebra");
  w.case1_holds = K * w.distance < kHalf;
  w.case2_holds = Rational(2) * diag > K * w.distance;
  return w;
}

namespace {

const CubePoint* lookup(const RetractionTable& R, const CubePoint& x) {
  for (const auto& [from, to] : R)
    if (from == x) return &to;
  return nullptr;
}

int family_index(const std::string& sheet, int L) {
  for (int b = 1; b <= L; ++b)
    if (sheet == family_sheet_id(b)) return b;
  return 0;
}

std::string set_str(const std::vector<int>& A) {
  std::string s = "{";
  for (std::size_t k = 0; k < A.size(); ++k) s += (k ? "," : "") + std::to_string(A[k]);
  return s + "}";
}

}  // namespace

ViolationReport check_retraction_violation(const RetractionTable& R, const Rational& K, const DefeatWitness& w) {
  const CubeSpace sp = w.space();
  const int L = sp.lambda();
  ViolationReport rep;
  for (const auto& [from, to] : R) {
    sp.validate(from);
    sp.validate(to);
    if (from.tag == CubePoint::Tag::Vertex) require(to == from, "retraction must fix the vertex " + set_str(from.A));
    if (to.tag == CubePoint::Tag::Inner)
      require(family_index(to.sheet, L) != 0, "retraction range leaves the family sheets: " + to.sheet);
    if (component_of(from) != component_of(to))
      rep.component_breaks.push_back("component " + set_str(component_of(from)) + " sent to " +
                                     set_str(component_of(to)));
  }
  const CubePoint* rp = lookup(R, w.p_star);
  if (!rp) fail(ErrorKind::TableIncomplete, "retraction table lacks p*");
  if (!rep.component_breaks.empty()) {
    rep.in_model = false;
    rep.inequality = "component preservation fails; a continuous retraction cannot do this";
    return rep;
  }

  if (rp->tag == CubePoint::Tag::Vertex) {
    rep.proof_case = 1;
    rep.beta0 = w.beta0;
  } else {
    rep.proof_case = 2;
    rep.beta0 = family_index(rp->sheet, L);
  }
  const CubePoint q = w.q_star_for(rep.beta0);
  const CubePoint* rq = lookup(R, q);
  if (!rq) fail(ErrorKind::TableIncomplete, "retraction table lacks q* for beta0 = " + std::to_string(rep.beta0));

  const Rational diag = w.family[rep.beta0 - 1].gamma[rep.beta0 - 1];
  rep.lhs = cube_distance(*rp, *rq, sp);
  rep.rhs = K * cube_distance(w.p_star, q, sp);
  if (rep.proof_case == 1) {
    rep.chain_low = cube_distance(CubePoint::vertex({}), *rq, sp);
    rep.chain_cap = kHalf;
  } else {
    bool same = rq->tag == CubePoint::Tag::Vertex || rq->sheet == rp->sheet;
    rep.chain_low = same ? Rational(2) * diag : kHalf;
    rep.chain_cap = diag;
  }
  rep.violated = rep.lhs > rep.rhs;
  rep.inequality = "d(R p*, R q*) = " + rep.lhs.str() + (rep.violated ? " > " : " <= ") + "K d(p*, q*) = " +
                   rep.rhs.str();
  ensure(rep.lhs >= rep.chain_low, "violation chain: lower bound not met");
  return rep;
}

RetractionTable nearest_point_retraction(const std::vector<CubePoint>& points, const DefeatWitness& w) {
  const CubeSpace sp = w.space();
  RetractionTable out;
  for (const auto& p : points) {
    sp.validate(p);
    if (p.tag == CubePoint::Tag::Vertex || family_index(p.sheet, sp.lambda()) != 0) out.emplace_back(p, p);
    else out.emplace_back(p, CubePoint::vertex(component_of(p)));
  }
  return out;
}

}  // namespace lipgap
