#include "lipgap/lipschitz_maps.hpp"

#include <algorithm>
#include <map>

#include "lipgap/errors.hpp"

namespace lipgap {

MonotonePLMap::MonotonePLMap(std::vector<Breakpoint> points, Rational K)
    : points_(std::move(points)), K_(std::move(K)) {
  require(K_ > Rational(0), "slope bound must be positive");
  require(!points_.empty() && points_[0] == Breakpoint{Rational(0), Rational(0)}, "map must start at (0,0)");
  for (std::size_t j = 0; j + 1 < points_.size(); ++j) {
    const auto& a = points_[j];
    const auto& b = points_[j + 1];
    require(a.x < b.x, "breakpoint x values must increase strictly");
    require(a.y <= b.y, "map must be nondecreasing");
    require(b.y - a.y <= K_ * (b.x - a.x), "slope exceeds K between " + a.x.str() + " and " + b.x.str());
  }
}

Rational MonotonePLMap::operator()(const Rational& x) const {
  require(points_.front().x <= x && x <= points_.back().x, "evaluation outside the map's range: " + x.str());
  auto it = std::lower_bound(points_.begin(), points_.end(), x,
                             [](const Breakpoint& p, const Rational& v) { return p.x < v; });
  if (it->x == x) return it->y;
  const Breakpoint& hi = *it;
  const Breakpoint& lo = *std::prev(it);
  return lo.y + (hi.y - lo.y) * (x - lo.x) / (hi.x - lo.x);
}

void MonotonePLMap::validate_against(const GapSet& domain, const GapSet& codomain) const {
  auto comps = domain.components();
  for (std::size_t j = 0; j + 1 < points_.size(); ++j) {
    const Rational& x0 = points_[j].x;
    const Rational& x1 = points_[j + 1].x;
    for (const auto& c : comps) {
      Rational lo = std::max(c.lo, x0), hi = std::min(c.hi, x1);
      if (lo > hi) continue;
      Rational ylo = (*this)(lo), yhi = (*this)(hi);
      require(codomain.in_complement(ylo), "value " + ylo.str() + " at " + lo.str() + " is inside a codomain gap");
      for (const auto& g : codomain.gaps())
        require(!(g.left < yhi && ylo < g.right()),
                "image of [" + lo.str() + ", " + hi.str() + "] crosses codomain gap at " + g.left.str());
    }
  }
}

Rational lipschitz_constant(std::span<const Breakpoint> s) {
  Rational best = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      require(s[i].x != s[j].x, "duplicate sample abscissa " + s[i].x.str());
      Rational q = abs(s[i].y - s[j].y) / abs(s[i].x - s[j].x);
      if (q > best) best = q;
    }
  return best;
}

MonotonePLMap monotonize(std::vector<Breakpoint> samples) {
  std::sort(samples.begin(), samples.end(), [](const Breakpoint& a, const Breakpoint& b) { return a.x < b.x; });
  for (std::size_t i = 0; i + 1 < samples.size(); ++i)
    require(samples[i].x != samples[i + 1].x, "duplicate sample abscissa " + samples[i].x.str());
  require(!samples.empty() && samples.front() == Breakpoint{Rational(0), Rational(0)}, "samples must contain (0,0)");
  require(samples.back() == Breakpoint{Rational(1), Rational(1)}, "samples must contain (1,1)");
  Rational run = samples.front().y;
  for (auto& s : samples) {
    run = std::max(run, s.y);
    s.y = run;
  }
  Rational L = lipschitz_constant(samples);
  return MonotonePLMap(std::move(samples), L);
}

namespace {

// lowest codomain-gap left endpoint at or above v, or 1
Rational stall_point(const GapSet& codomain, const Rational& v) {
  auto gaps = codomain.gaps();
  auto it = std::lower_bound(gaps.begin(), gaps.end(), v, [](const Gap& g, const Rational& x) { return g.left < x; });
  return it == gaps.end() ? Rational(1) : it->left;
}

// largest codomain point <= t, clamped to 1
Rational round_down(const GapSet& codomain, const Rational& t) {
  if (t >= Rational(1)) return Rational(1);
  if (const Gap* g = codomain.gap_containing(t)) return g->left;
  return t;
}

}  // namespace

FeasibilityResult max_feasible_map(const GapSet& domain, const GapSet& codomain, const Rational& K) {
  require(K > Rational(0), "K must be positive");
  std::vector<Breakpoint> pts{{Rational(0), Rational(0)}};
  std::vector<Rational> blocking;
  auto note_block = [&](const Rational& at) {
    if (blocking.empty() || blocking.back() != at) blocking.push_back(at);
  };
  auto push = [&](const Rational& x, const Rational& y) {
    if (pts.back().x == x) {
      ensure(pts.back().y == y, "conflicting values at one event");
      return;
    }
    pts.push_back({x, y});
  };

  Rational v = 0;
  auto comps = domain.components();
  for (std::size_t k = 0; k < comps.size(); ++k) {
    const auto& c = comps[k];
    if (k > 0) {
      Rational target = v + K * (c.lo - comps[k - 1].hi);
      Rational landed = round_down(codomain, target);
      if (landed < std::min(target, Rational(1))) note_block(landed);
      v = landed;
      push(c.lo, v);
    }
    if (c.hi == c.lo) continue;
    Rational ceiling = stall_point(codomain, v);
    Rational reach = v + K * (c.hi - c.lo);
    if (reach <= ceiling) {
      v = reach;
    } else {
      if (ceiling > v) push(c.lo + (ceiling - v) / K, ceiling);
      if (ceiling < Rational(1)) note_block(ceiling);
      v = ceiling;
    }
    push(c.hi, v);
  }
  bool feasible = v == Rational(1);
  return FeasibilityResult{feasible, MonotonePLMap(std::move(pts), K), v, std::move(blocking)};
}

FeasibilityResult max_feasible_map(const GapStructure& domain, const GapStructure& codomain, const Rational& K) {
  return max_feasible_map(domain.gap_set(), codomain.gap_set(), K);
}

std::vector<JumpCertificate> jump_certificates(const MonotonePLMap& F, const GapSet& domain,
                                               const GapSet& codomain) {
  auto pts = F.points();
  require(pts.back() == Breakpoint{Rational(1), Rational(1)}, "certificates need a map with F(1) = 1");
  F.validate_against(domain, codomain);
  auto comps = domain.components();
  std::vector<JumpCertificate> out;
  for (const auto& cg : codomain.gaps()) {
    // last component whose right end stays at or below the gap
    std::size_t k = 0;
    while (k + 1 < comps.size() && F(comps[k + 1].hi) <= cg.left) ++k;
    require(F(comps[k].hi) <= cg.left, "certificate construction failed below gap at " + cg.left.str());
    require(k + 1 < comps.size(), "certificate construction failed: map never passes " + cg.left.str());
    Rational xm = comps[k].hi, yp = comps[k + 1].lo;
    Rational pm = F(xm), pp = F(yp);
    require(pp >= cg.right(), "certificate construction failed: value " + pp.str() + " inside codomain gap");
    auto check = consecutive_pair_check(domain, xm, yp);
    ensure(std::holds_alternative<Gap>(check), "jump interval is not a domain gap");
    out.push_back(JumpCertificate{cg, std::get<Gap>(check), pm, pp, xm, yp});
  }
  return out;
}

std::vector<std::vector<JumpCertificate>> group_by_domain_gap(std::span<const JumpCertificate> certs) {
  std::vector<std::vector<JumpCertificate>> groups;
  for (const auto& c : certs) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto& g) { return g.front().domain_gap == c.domain_gap; });
    if (it == groups.end())
      groups.push_back({c});
    else
      it->push_back(c);
  }
  return groups;
}

Rational jump_spread(std::span<const JumpCertificate> group) {
  Rational best = 0;
  for (std::size_t j = 0; j < group.size(); ++j)
    for (std::size_t k = 0; k < group.size(); ++k) {
      if (j == k) continue;
      best = std::max(best, abs(group[j].codomain_gap.right() - group[k].codomain_gap.left));
    }
  return best;
}

bool check_jump_length(std::span<const JumpCertificate> group, const Rational& K) {
  require(!group.empty(), "empty certificate group");
  for (const auto& c : group) require(c.domain_gap == group.front().domain_gap, "certificates jump different domain gaps");
  return K * group.front().domain_gap.length >= jump_spread(group);
}

SweepInterval sweeping(const Rational& a, const Rational& b, const Rational& r) {
  require(a < b, "sweeping needs a < b");
  require(r > Rational(0), "sweeping radius must be positive");
  SweepInterval s{a, b, r, std::nullopt};
  Rational lo = b - r, hi = a + r;
  if (lo < hi) s.interval = std::make_pair(lo, hi);
  return s;
}

bool sweep_escape_check(const JumpCertificate& c1, const JumpCertificate& c2, const Rational& r, const Rational& K) {
  require(c1.domain_gap == c2.domain_gap, "sweep escape needs certificates sharing a domain gap");
  auto s = sweeping(c1.codomain_gap.left, c1.codomain_gap.right(), r);
  require(!s.contains(c2.codomain_gap.left, c2.codomain_gap.right()),
          "second codomain gap lies inside the sweeping");
  return K * c1.domain_gap.length > r;
}

}  // namespace lipgap
