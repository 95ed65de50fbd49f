#include "lipgap/adversary.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "lipgap/errors.hpp"
#include "lipgap/parallel.hpp"

namespace lipgap {

unsigned default_parallelism() {
  if (const char* env = std::getenv("LIPGAP_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

SweepChain sweep_chain(const GapStructure& target, int target_index, std::span<const int> sigma,
                       std::span<const Rational> gamma_star, const Rational& K) {
  require(gamma_star.size() >= sigma.size(), "gamma* prefix shorter than the ordering");
  SweepChain chain;
  chain.target_family_index = target_index;
  chain.sigma.assign(sigma.begin(), sigma.end());
  chain.n_values.push_back(1);
  ensure(target.gap_by_source(1) != nullptr, "first target gap is empty");
  OpenIntervalUnion S;
  for (int j : sigma) {
    require(j >= 1 && static_cast<std::size_t>(j) <= gamma_star.size(), "ordering entry out of range");
    const Gap* cur = target.gap_by_source(chain.n_values.back());
    auto sw = sweeping(cur->left, cur->right(), K * gamma_star[j - 1]);
    if (!sw.empty()) S.add({sw.interval->first, sw.interval->second});
    int next = 0;
    for (int n = chain.n_values.back() + 1; n <= target.depth(); ++n) {
      const Gap* g = target.gap_by_source(n);
      if (g && !S.contains({g->left, g->right()})) {
        next = n;
        break;
      }
    }
    if (next == 0)
      fail(ErrorKind::DepthInsufficient, "no escaping gap up to depth " + std::to_string(target.depth()));
    chain.n_values.push_back(next);
    chain.sweep_sets.push_back(S);
  }
  return chain;
}

namespace {

std::vector<std::vector<int>> all_orderings(int i) {
  std::vector<int> p(i);
  std::iota(p.begin(), p.end(), 1);
  std::vector<std::vector<int>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

GapStructure build_member(const GammaSequence& g, const RationalEnumeration& en, int depth, const BuildOptions& b) {
  if (!g.can_extend_to(depth))
    fail(ErrorKind::DepthInsufficient, "family member has only " + std::to_string(g.size()) + " terms");
  return build_gaps(g, en, depth, b);
}

}  // namespace

AdversaryPrefix construct_gamma_star(const std::vector<GammaSequence>& family, const Rational& K,
                                     const Rational& eps0, const RationalEnumeration& en,
                                     const AdversaryOptions& opts) {
  const int N = static_cast<int>(family.size());
  if (N < 1 || N > 8) fail(ErrorKind::Guard, "family size must be between 1 and 8, got " + std::to_string(N));
  require(K >= Rational(1), "K must be at least 1");
  for (const auto& g : family) {
    require(g.eps0() == eps0, "family members must share eps0");
    require(g.size() >= 1, "family members need at least one term");
  }

  AdversaryPrefix out{K, eps0, en.name(), family, {}, {}};
  out.gamma_star.push_back(eps0 * family[0].term(1) / (Rational(4) * K));

  for (int i = 1; i < N; ++i) {
    const GammaSequence& target = family[i];
    AdversaryStep step;
    step.index = i + 1;
    auto orders = all_orderings(i);
    std::vector<SweepChain> chains;
    for (int depth = opts.initial_depth;; depth *= 2) {
      if (depth > opts.depth_cap)
        fail(ErrorKind::DepthInsufficient, "sweep chains need more than depth " + std::to_string(opts.depth_cap));
      GapStructure gs = build_member(target, en, depth, opts.build);
      try {
        chains = parallel_map<SweepChain>(orders.size(), opts.threads, [&](std::size_t k) {
          return sweep_chain(gs, i + 1, orders[k], out.gamma_star, K);
        });
        step.target_depth = depth;
        break;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::DepthInsufficient) throw;
      }
    }
    for (const auto& c : chains) step.n_omega = std::max(step.n_omega, c.n_sigma());
    Rational g_omega = target.extended(step.n_omega).term(step.n_omega);
    step.bound = pow2(-(i + 2)) * eps0 * g_omega / K;
    step.chains = std::move(chains);

    Rational cand = step.bound / Rational(2);
    for (;; cand /= Rational(2), ++step.halvings) {
      if (step.halvings > opts.max_halvings) fail(ErrorKind::Guard, "could not place gamma* term " + std::to_string(i + 1));
      if (cand >= out.gamma_star.back()) continue;
      std::vector<Rational> trial = out.gamma_star;
      trial.push_back(cand);
      GapStructure probe = build_gaps(GammaSequence(eps0, trial, Rational(0)), en, i + 1, opts.build);
      if (probe.gap_by_source(i + 1)) break;
    }
    out.gamma_star.push_back(cand);
    out.steps.push_back(std::move(step));
  }
  return out;
}

std::vector<std::string> audit_prefix(const AdversaryPrefix& p, const BuildOptions& build) {
  std::vector<std::string> bad;
  auto en = RationalEnumeration::from_name(p.enumeration);
  const int N = static_cast<int>(p.gamma_star.size());
  if (N != static_cast<int>(p.family.size())) bad.push_back("prefix length differs from family size");
  for (int i = 1; i <= N; ++i) {
    const Rational& g = p.gamma_star[i - 1];
    if (g <= Rational(0)) bad.push_back("gamma*_" + std::to_string(i) + " not positive");
    if (i > 1 && !(g < p.gamma_star[i - 2])) bad.push_back("gamma*_" + std::to_string(i) + " not below its predecessor");
    if (!(g < pow2(-(i + 1)) * p.eps0 / p.K)) bad.push_back("gamma*_" + std::to_string(i) + " violates the size bound");
  }
  if (!bad.empty()) return bad;
  if (p.gamma_star.front() != p.eps0 * p.family.front().term(1) / (Rational(4) * p.K))
    bad.push_back("gamma*_1 differs from eps0 gamma^1_1 / 4K");
  GapStructure dom = build_gaps(GammaSequence(p.eps0, p.gamma_star, Rational(0)), en, N, build);
  for (int i = 1; i <= N; ++i)
    if (!dom.gap_by_source(i)) bad.push_back("gap " + std::to_string(i) + " of gamma* is empty");

  for (const auto& st : p.steps) {
    const int i = st.index - 1;
    const GammaSequence target = p.family[i].extended(st.target_depth);
    auto gamma = [&](int n) { return target.term(n); };
    bool strictly_decreasing = true;
    for (int n = 2; n <= st.n_omega; ++n) strictly_decreasing &= gamma(n) < gamma(n - 1);
    std::size_t expected_chains = 1;
    for (int k = 2; k <= i; ++k) expected_chains *= k;
    if (st.chains.size() != expected_chains) bad.push_back("step " + std::to_string(st.index) + ": wrong ordering count");
    for (const auto& c : st.chains) {
      std::string tag = "step " + std::to_string(st.index) + " chain";
      for (int s : c.sigma) tag += " " + std::to_string(s);
      Rational budget = 0;
      for (std::size_t k = 0; k < c.sigma.size(); ++k) {
        if (c.n_values[k + 1] <= c.n_values[k]) bad.push_back(tag + ": n not increasing");
        budget += pow2(-c.sigma[k]) * p.eps0;
        if (!(c.sweep_sets[k].measure() < budget)) bad.push_back(tag + ": sweep measure over budget");
        if (c.sweep_sets[k].pieces().size() > k + 1) bad.push_back(tag + ": too many sweep pieces");
      }
      for (std::size_t k = 0; k + 1 < c.n_values.size(); ++k) {
        bool ok = strictly_decreasing ? gamma(c.n_sigma()) < gamma(c.n_values[k])
                                      : gamma(c.n_sigma()) <= gamma(c.n_values[k]);
        if (!ok) bad.push_back(tag + ": chain inequality fails");
      }
      if (gamma(st.n_omega) > gamma(c.n_sigma())) bad.push_back(tag + ": n_omega term not smallest");
    }
    Rational bound = pow2(-(i + 2)) * p.eps0 * gamma(st.n_omega) / p.K;
    if (bound != st.bound) bad.push_back("step " + std::to_string(st.index) + ": recorded bound differs");
    if (!(p.gamma_star[i] < bound)) bad.push_back("step " + std::to_string(st.index) + ": gamma* not below bound");
  }
  return bad;
}

std::vector<DefeatVerdict> verify_prefix_defeat(const AdversaryPrefix& prefix, const GeometricTail& tail,
                                                int depth_domain, int depth_codomain, const BuildOptions& build) {
  const int N = static_cast<int>(prefix.gamma_star.size());
  require(depth_domain >= N, "domain depth must be at least the prefix length");
  auto en = RationalEnumeration::from_name(prefix.enumeration);
  auto dom_seq = GammaSequence::with_geometric_tail(prefix.eps0, prefix.gamma_star, tail.ratio);
  GapStructure dom = build_gaps(dom_seq, en, depth_domain, build);
  std::vector<DefeatVerdict> out;
  for (int m = 1; m <= static_cast<int>(prefix.family.size()); ++m) {
    require(depth_codomain >= prefix.n_omega_for(m),
            "codomain depth below n_omega of member " + std::to_string(m));
    GapStructure cod = build_member(prefix.family[m - 1], en, depth_codomain, build);
    auto res = max_feasible_map(dom, cod, prefix.K);
    out.push_back(DefeatVerdict{m, res.feasible, depth_domain, depth_codomain, std::move(res)});
  }
  return out;
}

AdversaryPrefix sabotage_with_member(const AdversaryPrefix& prefix, int member) {
  require(member >= 1 && member <= static_cast<int>(prefix.family.size()), "sabotage member out of range");
  AdversaryPrefix out = prefix;
  const std::size_t N = prefix.gamma_star.size();
  GammaSequence g = prefix.family[member - 1].extended(N);
  out.gamma_star.assign(g.terms().begin(), g.terms().begin() + N);
  return out;
}

}  // namespace lipgap
