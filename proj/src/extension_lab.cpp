#include "lipgap/extension_lab.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lipgap/errors.hpp"

namespace lipgap {

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> ids, std::vector<std::vector<Rational>> dist, int base)
    : ids_(std::move(ids)), dist_(std::move(dist)), base_(base) {
  const int n = size();
  require(n >= 1, "metric space needs at least one point");
  require(static_cast<int>(dist_.size()) == n, "distance matrix has the wrong number of rows");
  require(base >= 0 && base < n, "base point out of range");
  std::set<std::string> seen(ids_.begin(), ids_.end());
  require(static_cast<int>(seen.size()) == n, "point ids must be distinct");
  for (int i = 0; i < n; ++i) {
    require(static_cast<int>(dist_[i].size()) == n, "distance matrix row " + std::to_string(i) + " has the wrong length");
    require(dist_[i][i].is_zero(), "d(" + ids_[i] + "," + ids_[i] + ") must be 0");
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      require(dist_[i][j] == dist_[j][i], "distance matrix not symmetric at " + ids_[i] + "," + ids_[j]);
      require(dist_[i][j] > Rational(0), "distinct points " + ids_[i] + "," + ids_[j] + " at distance 0");
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < n; ++m)
        require(dist_[i][j] <= dist_[i][m] + dist_[m][j],
                "triangle inequality fails for " + ids_[i] + "," + ids_[m] + "," + ids_[j]);
  approx_.resize(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) approx_[i * n + j] = dist_[i][j].to_double();
}

int FiniteMetricSpace::index_of(const std::string& id) const {
  auto it = std::find(ids_.begin(), ids_.end(), id);
  require(it != ids_.end(), "unknown point id '" + id + "'");
  return static_cast<int>(it - ids_.begin());
}

Rational FiniteMetricSpace::radius(const std::vector<int>& S) const {
  require(!S.empty(), "radius of an empty set");
  std::optional<Rational> best;
  for (int c = 0; c < size(); ++c) {
    Rational m = 0;
    for (int s : S) m = std::max(m, d(c, s));
    if (!best || m < *best) best = m;
  }
  return *best;
}

Rational FiniteMetricSpace::separation(const std::vector<int>& S) const {
  std::optional<Rational> best;
  for (std::size_t a = 0; a < S.size(); ++a)
    for (std::size_t b = a + 1; b < S.size(); ++b)
      if (!best || d(S[a], S[b]) < *best) best = d(S[a], S[b]);
  return best.value_or(Rational(0));
}

bool FiniteMetricSpace::separated(const std::vector<int>& S, const Rational& eps) const {
  for (std::size_t a = 0; a < S.size(); ++a)
    for (std::size_t b = a + 1; b < S.size(); ++b)
      if (S[a] != S[b] && d(S[a], S[b]) < eps) return false;
  return true;
}

Rational lipschitz_constant(const FiniteMetricSpace& M, const std::map<int, Rational>& f) {
  Rational L = 0;
  for (auto a = f.begin(); a != f.end(); ++a)
    for (auto b = std::next(a); b != f.end(); ++b)
      L = std::max(L, abs(a->second - b->second) / M.d(a->first, b->first));
  return L;
}

Rational lipschitz_constant(const FiniteMetricSpace& M, const FunctionTable& f) {
  require(static_cast<int>(f.size()) == M.size(), "function table size differs from the space");
  Rational L = 0;
  for (int i = 0; i < M.size(); ++i)
    for (int j = i + 1; j < M.size(); ++j) L = std::max(L, abs(f[i] - f[j]) / M.d(i, j));
  return L;
}

FunctionTable mcshane_extend(const FiniteMetricSpace& M, const LipschitzSample& f) {
  require(!f.table.empty(), "McShane extension needs a nonempty sample");
  require(f.L >= Rational(0), "Lipschitz constant must be nonnegative");
  for (const auto& [i, v] : f.table) require(i >= 0 && i < M.size(), "sample point out of range");
  require(lipschitz_constant(M, f.table) <= f.L, "sample is not L-Lipschitz on its domain");
  FunctionTable out(M.size());
  for (int x = 0; x < M.size(); ++x) {
    std::optional<Rational> best;
    for (const auto& [y, v] : f.table) {
      Rational c = v + f.L * M.d(x, y);
      if (!best || c < *best) best = c;
    }
    out[x] = *best;
  }
  return out;
}

FunctionTable cone_function(const FiniteMetricSpace& M, int x0, const Rational& value, const Rational& lam,
                            const Rational& eps, ConeSign sign) {
  require(x0 >= 0 && x0 < M.size(), "cone apex out of range");
  require(lam >= Rational(1) && eps > Rational(0), "cone needs lam >= 1 and eps > 0");
  require(sign == ConeSign::Positive ? value > Rational(0) : value < Rational(0), "cone sign does not match value");
  const Rational slope = lam * (Rational(1) + eps);
  FunctionTable out(M.size());
  for (int p = 0; p < M.size(); ++p)
    out[p] = sign == ConeSign::Positive ? std::max(value - slope * M.d(p, x0), Rational(0))
                                        : std::min(value + slope * M.d(p, x0), Rational(0));
  return out;
}

NormingResult norming_function(const FiniteMetricSpace& M, const FunctionTable& f, std::vector<int> F,
                               const Rational& lam, const Rational& eps) {
  require(static_cast<int>(f.size()) == M.size(), "function table size differs from the space");
  require(lam >= Rational(1) && eps > Rational(0), "norming needs lam >= 1 and eps > 0");
  require(f[M.base()].is_zero(), "f must vanish at the base point");
  require(lipschitz_constant(M, f) <= Rational(1), "f must be 1-Lipschitz; normalize first");
  std::sort(F.begin(), F.end());
  F.erase(std::unique(F.begin(), F.end()), F.end());
  require(std::binary_search(F.begin(), F.end(), M.base()), "F must contain the base point");

  NormingResult r;
  r.constant = lam * (Rational(1) + eps);
  r.g.assign(M.size(), Rational(0));
  std::vector<FunctionTable> pos, neg;
  for (int x : F) {
    if (f[x] > Rational(0)) pos.push_back(cone_function(M, x, f[x], lam, eps, ConeSign::Positive));
    if (f[x] < Rational(0)) neg.push_back(cone_function(M, x, f[x], lam, eps, ConeSign::Negative));
  }
  for (int p = 0; p < M.size(); ++p) {
    if (f[p] > Rational(0))
      for (const auto& t : pos) r.g[p] = std::max(r.g[p], t[p]);
    else if (f[p] < Rational(0))
      for (const auto& t : neg) r.g[p] = std::min(r.g[p], t[p]);
  }

  r.agrees_on_F = std::all_of(F.begin(), F.end(), [&](int x) { return r.g[x] == f[x]; });
  r.vanishes_at_base = r.g[M.base()].is_zero();
  r.support_in_balls = true;
  for (int p = 0; p < M.size(); ++p) {
    if (r.g[p].is_zero()) continue;
    bool in_ball = std::any_of(F.begin(), F.end(),
                               [&](int x) { return r.constant * M.d(p, x) < M.d(x, M.base()); });
    r.support_in_balls &= in_ball;
  }
  r.lipschitz_ok = lipschitz_constant(M, r.g) <= r.constant;
  return r;
}

namespace {

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Distances from every point of (F, extras) to each extra, row by row.
struct Signature {
  std::vector<int> extras;
  std::vector<double> approx;
};

Signature signature(const FiniteMetricSpace& M, const std::vector<int>& F, const std::vector<int>& extras) {
  Signature s{extras, {}};
  auto row = [&](int r) {
    for (int c : extras) s.approx.push_back(M.dd(r, c));
  };
  for (int f : F) row(f);
  for (int e : extras) row(e);
  return s;
}

bool within_exact(const FiniteMetricSpace& M, const std::vector<int>& F, const std::vector<int>& a,
                  const std::vector<int>& b, const Rational& r) {
  auto rows_ok = [&](int ra, int rb) {
    for (std::size_t c = 0; c < a.size(); ++c)
      if (abs(M.d(ra, a[c]) - M.d(rb, b[c])) > r) return false;
    return true;
  };
  for (int f : F)
    if (!rows_ok(f, f)) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!rows_ok(a[i], b[i])) return false;
  return true;
}

bool within(const FiniteMetricSpace& M, const std::vector<int>& F, const Signature& a, const Signature& b,
            const Rational& r, double r_approx) {
  const double slack = r_approx + 1e-9 * (1.0 + r_approx);
  for (std::size_t i = 0; i < a.approx.size(); ++i)
    if (std::fabs(a.approx[i] - b.approx[i]) > slack) return false;
  return within_exact(M, F, a.extras, b.extras, r);
}

double binom(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

template <class Visit>
void enumerate_sets(const FiniteMetricSpace& M, const std::vector<int>& F, int k, const Rational& eps,
                    const std::vector<int>& pool, Visit&& visit) {
  std::vector<int> pick;
  std::vector<int> ok_with_F;
  for (int p : pool) {
    bool ok = true;
    for (int f : F) ok &= M.d(p, f) >= eps;
    if (ok) ok_with_F.push_back(p);
  }
  for (int l = 0; l <= k; ++l) {
    auto rec = [&](auto&& self, std::size_t from) -> void {
      if (static_cast<int>(pick.size()) == l) {
        visit(pick);
        return;
      }
      for (std::size_t i = from; i < ok_with_F.size(); ++i) {
        int p = ok_with_F[i];
        bool ok = true;
        for (int q : pick) ok &= M.d(p, q) >= eps;
        if (!ok) continue;
        pick.push_back(p);
        self(self, i + 1);
        pick.pop_back();
      }
    };
    rec(rec, 0);
  }
}

std::vector<int> extras_pool(const FiniteMetricSpace& M, const std::vector<int>& F, const NetOptions& opts) {
  std::vector<int> pool;
  if (opts.universe) pool = sorted_unique(*opts.universe);
  else
    for (int i = 0; i < M.size(); ++i) pool.push_back(i);
  std::vector<int> out;
  for (int p : pool) {
    require(p >= 0 && p < M.size(), "universe point out of range");
    if (!std::binary_search(F.begin(), F.end(), p)) out.push_back(p);
  }
  return out;
}

}  // namespace

NetResult finite_net(const FiniteMetricSpace& M, std::vector<int> F, int k, const Rational& eps,
                     const NetOptions& opts) {
  F = sorted_unique(std::move(F));
  require(!F.empty(), "net needs a nonempty F");
  for (int f : F) require(f >= 0 && f < M.size(), "F point out of range");
  require(k >= 0, "k must be nonnegative");
  require(eps > Rational(0), "eps must be positive");
  if (F.size() >= 2) require(eps <= M.separation(F), "eps exceeds the separation of F");
  const auto pool = extras_pool(M, F, opts);
  double bound = 0;
  for (int l = 0; l <= k; ++l) bound += binom(static_cast<int>(pool.size()), l);
  if (bound > static_cast<double>(opts.max_candidates))
    fail(ErrorKind::Guard, "net enumeration would visit up to " + std::to_string(static_cast<long long>(bound)) +
                               " sets, over the cap " + std::to_string(opts.max_candidates));

  NetResult net;
  net.F = F;
  net.k = k;
  net.eps = eps;
  net.radius = eps * eps;
  const double r_approx = net.radius.to_double();
  std::vector<std::vector<Signature>> by_size(k + 1);
  std::set<int> Z(F.begin(), F.end());
  enumerate_sets(M, F, k, eps, pool, [&](const std::vector<int>& extras) {
    ++net.candidates;
    Signature s = signature(M, F, extras);
    auto& group = by_size[extras.size()];
    for (const auto& c : group)
      if (within(M, F, s, c, net.radius, r_approx)) return;
    std::vector<int> center = F;
    center.insert(center.end(), extras.begin(), extras.end());
    net.centers.push_back(std::move(center));
    Z.insert(extras.begin(), extras.end());
    group.push_back(std::move(s));
  });
  net.Z.assign(Z.begin(), Z.end());
  return net;
}

std::vector<std::vector<int>> admissible_sets(const FiniteMetricSpace& M, const NetResult& net,
                                              const NetOptions& opts) {
  std::vector<std::vector<int>> out;
  enumerate_sets(M, net.F, net.k, net.eps, extras_pool(M, net.F, opts), [&](const std::vector<int>& extras) {
    std::vector<int> E = net.F;
    E.insert(E.end(), extras.begin(), extras.end());
    out.push_back(std::move(E));
  });
  return out;
}

LocalMap local_map(const FiniteMetricSpace& M, std::vector<int> E, const NetResult& net) {
  E = sorted_unique(std::move(E));
  for (int p : E) require(p >= 0 && p < M.size(), "E point out of range");
  for (int f : net.F) require(std::binary_search(E.begin(), E.end(), f), "E must contain F");
  std::vector<int> extras;
  for (int p : E)
    if (!std::binary_search(net.F.begin(), net.F.end(), p)) extras.push_back(p);
  require(static_cast<int>(extras.size()) <= net.k, "E has more than k points outside F");
  require(M.separated(E, net.eps), "E is not eps-separated");

  const Signature s = signature(M, net.F, extras);
  const double r_approx = net.radius.to_double();
  LocalMap out;
  for (std::size_t j = 0; j < net.centers.size(); ++j) {
    const auto& c = net.centers[j];
    if (c.size() != E.size()) continue;
    std::vector<int> cx(c.begin() + net.F.size(), c.end());
    if (!within(M, net.F, s, signature(M, net.F, cx), net.radius, r_approx)) continue;
    out.center = static_cast<int>(j);
    for (int f : net.F) out.pairs.emplace_back(f, f);
    for (std::size_t i = 0; i < extras.size(); ++i) out.pairs.emplace_back(extras[i], cx[i]);
    break;
  }
  ensure(out.center >= 0, "no net center within eps^2 of E; the covering is broken");
  std::sort(out.pairs.begin(), out.pairs.end());
  out.lip = out.pairs.size() < 2 ? Rational(1) : Rational(0);
  for (std::size_t a = 0; a < out.pairs.size(); ++a)
    for (std::size_t b = a + 1; b < out.pairs.size(); ++b)
      out.lip = std::max(out.lip, M.d(out.pairs[a].second, out.pairs[b].second) /
                                      M.d(out.pairs[a].first, out.pairs[b].first));
  ensure(out.lip <= Rational(1) + net.eps, "local map exceeds 1 + eps");
  return out;
}

SeparatedChain separated_chain(const FiniteMetricSpace& M, std::vector<std::vector<int>> F_chain,
                               std::vector<Rational> eps_chain) {
  const std::size_t N = F_chain.size();
  require(N >= 1 && eps_chain.size() == N, "chain needs one eps per level");
  for (auto& F : F_chain) {
    F = sorted_unique(std::move(F));
    for (int p : F) require(p >= 0 && p < M.size(), "F point out of range");
  }
  for (std::size_t n = 0; n < N; ++n) {
    require(eps_chain[n] > Rational(0), "eps must be positive");
    if (n > 0) {
      require(!(eps_chain[n] > eps_chain[n - 1]), "eps_chain not decreasing");
      require(std::includes(F_chain[n].begin(), F_chain[n].end(), F_chain[n - 1].begin(), F_chain[n - 1].end()),
              "F_chain not increasing");
    }
    if (F_chain[n].size() >= 2)
      require(eps_chain[n] <= M.separation(F_chain[n]), "eps_n exceeds the separation of F_n");
  }

  SeparatedChain c{F_chain, eps_chain, {}};
  std::set<int> D;
  for (std::size_t n = 0; n < N; ++n) {
    D.insert(F_chain[n].begin(), F_chain[n].end());
    for (int p = 0; p < M.size(); ++p) {
      if (D.count(p)) continue;
      bool ok = true;
      for (std::size_t m = n; m < N && ok; ++m) {
        for (int q : D) ok &= M.d(p, q) >= eps_chain[m];
        for (int q : F_chain[m]) ok &= q == p || M.d(p, q) >= eps_chain[m];
      }
      if (ok) D.insert(p);
    }
    c.D_chain.emplace_back(D.begin(), D.end());
  }
  return c;
}

std::vector<std::string> audit_separated_chain(const FiniteMetricSpace& M, const SeparatedChain& c) {
  std::vector<std::string> bad;
  const std::size_t N = c.D_chain.size();
  if (N == 0 || c.F_chain.size() != N || c.eps_chain.size() != N) return {"chain levels do not line up"};
  for (std::size_t n = 0; n < N; ++n) {
    const auto& D = c.D_chain[n];
    std::string lvl = "level " + std::to_string(n + 1);
    if (n + 1 < N && !std::includes(c.D_chain[n + 1].begin(), c.D_chain[n + 1].end(), D.begin(), D.end()))
      bad.push_back(lvl + ": D not contained in the next D");
    if (!std::includes(D.begin(), D.end(), c.F_chain[n].begin(), c.F_chain[n].end()))
      bad.push_back(lvl + ": F not contained in D");
    for (std::size_t m = n; m < N; ++m) {
      std::vector<int> U = D;
      U.insert(U.end(), c.F_chain[m].begin(), c.F_chain[m].end());
      U = sorted_unique(U);
      if (!M.separated(U, c.eps_chain[m]))
        bad.push_back(lvl + ": D with F_" + std::to_string(m + 1) + " not eps-separated");
    }
  }
  const auto& last = c.D_chain.back();
  for (int p = 0; p < M.size(); ++p) {
    if (std::binary_search(last.begin(), last.end(), p)) continue;
    bool blocked = std::any_of(last.begin(), last.end(), [&](int q) { return M.d(p, q) < c.eps_chain.back(); });
    if (!blocked) bad.push_back("point " + M.id(p) + " could still be added to the last D");
  }
  return bad;
}

std::vector<int> ExtensionOperator::S_union() const {
  std::set<int> s;
  for (const auto& S : S_chain) s.insert(S.begin(), S.end());
  return {s.begin(), s.end()};
}

FunctionTable ExtensionOperator::apply(const FunctionTable& f) const {
  require(f.size() == assignment.size(), "function table size differs from the space");
  FunctionTable out(f.size());
  for (std::size_t p = 0; p < f.size(); ++p) out[p] = f[assignment[p]];
  return out;
}

ExtensionOperator extension_operator(const FiniteMetricSpace& M, const std::vector<int>& p_sequence,
                                     const std::optional<SeparatedChain>& D, const NetOptions& opts) {
  const int N = static_cast<int>(p_sequence.size());
  require(N >= 1, "extension operator needs at least one level");
  for (int p : p_sequence) require(p >= 0 && p < M.size(), "sequence point out of range");
  require(p_sequence.front() != M.base(), "p_1 must differ from the base point");

  ExtensionOperator T;
  T.p_sequence = p_sequence;
  T.S_chain.push_back({M.base()});
  std::vector<NetResult> nets;
  std::vector<std::vector<int>> balls;
  for (int n = 1; n <= N; ++n) {
    std::vector<int> F = T.S_chain.back();
    F.push_back(p_sequence[n - 1]);
    F = sorted_unique(F);
    Rational theta = M.separation(F);
    Rational eps = std::min(Rational(1, n), theta);
    Rational r = M.radius(F);
    Rational R = std::max(r, Rational(n));
    std::vector<int> ball;
    for (int p = 0; p < M.size(); ++p)
      if (M.d(M.base(), p) <= R || std::binary_search(F.begin(), F.end(), p)) ball.push_back(p);
    NetOptions o = opts;
    o.universe = ball;
    nets.push_back(finite_net(M, F, n, eps, o));
    T.F_chain.push_back(F);
    T.theta.push_back(theta);
    T.eps.push_back(eps);
    T.radius.push_back(r);
    T.R.push_back(R);
    T.S_chain.push_back(nets.back().Z);
    balls.push_back(std::move(ball));
  }

  if (D) {
    if (D->F_chain != T.F_chain || D->eps_chain != T.eps)
      fail(ErrorKind::ChainMismatch, "separated chain was built for different F_n or eps_n");
    auto bad = audit_separated_chain(M, *D);
    if (!bad.empty()) fail(ErrorKind::ChainMismatch, "separated chain fails its audit: " + bad.front());
    T.D = *D;
  } else {
    T.D = separated_chain(M, T.F_chain, T.eps);
  }

  const auto& F_N = T.F_chain.back();
  const auto& ball_N = balls.back();
  std::vector<int> extras;
  for (int p : T.D.D_chain.back())
    if (std::binary_search(ball_N.begin(), ball_N.end(), p) && !std::binary_search(F_N.begin(), F_N.end(), p))
      extras.push_back(p);
  T.unique_maximum = static_cast<int>(extras.size()) <= N;
  if (!T.unique_maximum) extras.resize(N);
  T.E_max = F_N;
  T.E_max.insert(T.E_max.end(), extras.begin(), extras.end());
  T.E_max = sorted_unique(T.E_max);

  LocalMap L = local_map(M, T.E_max, nets.back());
  T.assignment.assign(M.size(), M.base());
  for (const auto& [from, to] : L.pairs) T.assignment[from] = to;
  T.map_lipschitz = L.lip;
  T.certificate = Rational(1) + T.eps.back();
  ensure(T.map_lipschitz <= T.certificate, "extension map exceeds its certificate");
  for (int n = 0; n < N; ++n)
    for (int p : T.S_chain[n]) ensure(T.assignment[p] == p, "extension property fails on S_" + std::to_string(n));
  return T;
}

}  // namespace lipgap
