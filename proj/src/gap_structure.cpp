#include "lipgap/gap_structure.hpp"

#include <algorithm>

#include "lipgap/errors.hpp"

namespace lipgap {

GammaSequence::GammaSequence(Rational eps0, std::vector<Rational> terms, Rational tail_bound,
                             std::optional<GeometricTail> tail_rule)
    : eps0_(std::move(eps0)),
      terms_(std::move(terms)),
      tail_bound_(std::move(tail_bound)),
      tail_rule_(std::move(tail_rule)) {
  require(eps0_ > Rational(0) && eps0_ < Rational(1, 2), "eps0 must lie in (0, 1/2)");
  require(tail_bound_ >= Rational(0), "tail bound must be nonnegative");
  Rational sum = 0;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    require(terms_[i] > Rational(0), "gamma terms must be positive");
    if (i > 0) require(terms_[i] <= terms_[i - 1], "gamma terms must be nonincreasing");
    sum += terms_[i];
  }
  require(sum + tail_bound_ <= Rational(1) - eps0_, "sum of gamma terms plus tail exceeds 1 - eps0");
  if (tail_rule_) {
    const Rational& r = tail_rule_->ratio;
    require(r > Rational(0) && r < Rational(1), "geometric tail ratio must lie in (0,1)");
    require(!terms_.empty(), "a tail rule needs at least one explicit term");
    require(tail_bound_ == terms_.back() * r / (Rational(1) - r),
            "tail bound must equal the exact geometric tail sum");
  }
}

GammaSequence GammaSequence::with_geometric_tail(Rational eps0, std::vector<Rational> terms,
                                                 Rational ratio) {
  require(!terms.empty(), "a tail rule needs at least one explicit term");
  require(ratio > Rational(0) && ratio < Rational(1), "geometric tail ratio must lie in (0,1)");
  Rational tail = terms.back() * ratio / (Rational(1) - ratio);
  return GammaSequence(std::move(eps0), std::move(terms), tail, GeometricTail{ratio});
}

GammaSequence GammaSequence::geometric(Rational eps0, Rational first, Rational ratio,
                                       std::size_t materialized) {
  std::vector<Rational> terms{first};
  for (std::size_t i = 1; i < std::max<std::size_t>(materialized, 1); ++i) terms.push_back(terms.back() * ratio);
  return with_geometric_tail(std::move(eps0), std::move(terms), std::move(ratio));
}

const Rational& GammaSequence::term(std::size_t i) const {
  require(i >= 1 && i <= terms_.size(), "gamma index out of range");
  return terms_[i - 1];
}

GammaSequence GammaSequence::extended(std::size_t m) const {
  if (m <= terms_.size()) return *this;
  if (!tail_rule_) fail(ErrorKind::Precondition, "gamma has no tail rule to extend to " + std::to_string(m) + " terms");
  std::vector<Rational> t = terms_;
  while (t.size() < m) t.push_back(t.back() * tail_rule_->ratio);
  return with_geometric_tail(eps0_, std::move(t), tail_rule_->ratio);
}

GapSet::GapSet(std::vector<Gap> gaps) {
  for (auto& g : gaps)
    if (!g.empty) gaps_.push_back(std::move(g));
  std::sort(gaps_.begin(), gaps_.end(), [](const Gap& a, const Gap& b) { return a.left < b.left; });
  for (std::size_t i = 0; i < gaps_.size(); ++i) {
    const Gap& g = gaps_[i];
    require(g.length > Rational(0), "gap of nonpositive length");
    require(g.left >= Rational(0) && g.right() <= Rational(1), "gap leaves (0,1): " + g.left.str());
    if (i > 0) require(gaps_[i - 1].right() <= g.left, "overlapping gaps at " + g.left.str());
  }
}

std::vector<ClosedInterval> GapSet::components() const {
  std::vector<ClosedInterval> out;
  Rational start = 0;
  for (const auto& g : gaps_) {
    out.push_back({start, g.left});
    start = g.right();
  }
  out.push_back({start, Rational(1)});
  return out;
}

const Gap* GapSet::gap_containing(const Rational& x) const {
  auto it = std::lower_bound(gaps_.begin(), gaps_.end(), x,
                             [](const Gap& g, const Rational& v) { return g.left < v; });
  if (it == gaps_.begin()) return nullptr;
  --it;
  return x < it->right() ? &*it : nullptr;
}

bool GapSet::in_complement(const Rational& x) const {
  return x >= Rational(0) && x <= Rational(1) && gap_containing(x) == nullptr;
}

const Gap* GapSet::gap_between(const Rational& x, const Rational& y) const {
  auto it = std::lower_bound(gaps_.begin(), gaps_.end(), x,
                             [](const Gap& g, const Rational& v) { return g.left < v; });
  if (it != gaps_.end() && it->left == x && it->right() == y) return &*it;
  return nullptr;
}

Rational GapSet::complement_measure() const {
  Rational m = 1;
  for (const auto& g : gaps_) m -= g.length;
  return m;
}

GapStructure::GapStructure(GammaSequence gamma, std::string enumeration, int depth,
                           std::vector<Gap> placements)
    : gamma_(std::move(gamma)),
      enumeration_(std::move(enumeration)),
      depth_(depth),
      placements_(std::move(placements)) {
  RationalEnumeration::from_name(enumeration_);
  require(depth_ >= 0 && static_cast<std::size_t>(depth_) == placements_.size(), "placement count differs from depth");
  require(gamma_.size() >= static_cast<std::size_t>(depth_), "gamma shorter than depth");
  for (int i = 0; i < depth_; ++i) {
    const Gap& g = placements_[i];
    require(g.source_index == i + 1, "placements out of source order");
    require(g.length == gamma_.term(i + 1), "gap length differs from its gamma term");
    require(g.empty == (g.enumeration_index == 0), "empty flag and enumeration index disagree");
  }
  set_ = GapSet(placements_);
  validate_gap_structure(*this);
}

const Gap* GapStructure::gap_by_source(int i) const {
  if (i < 1 || i > depth_ || placements_[i - 1].empty) return nullptr;
  return &placements_[i - 1];
}

GapStructure build_gaps(const GammaSequence& gamma, const RationalEnumeration& en, int depth,
                        const BuildOptions& opts) {
  require(depth >= 0, "negative depth");
  require(gamma.can_extend_to(depth), "depth " + std::to_string(depth) + " exceeds available gamma terms");
  GammaSequence g = gamma.extended(depth);
  if (g.size() > 0) require(en.at(1) + g.term(1) < Rational(1), "q_1 + gamma_1 must be < 1");

  std::vector<ClosedInterval> comps{{Rational(0), Rational(1)}};
  std::vector<Gap> placements;
  for (int i = 1; i <= depth; ++i) {
    const Rational& len = g.term(i);
    std::vector<ClosedInterval> allowed;
    for (const auto& c : comps)
      if (c.hi - c.lo >= len) allowed.push_back({c.lo, c.hi - len});
    if (allowed.empty()) {
      placements.push_back(Gap{Rational(0), len, i, true, 0});
      continue;
    }
    auto idx = en.first_index_in(allowed, opts.horizon);
    if (!idx)
      fail(ErrorKind::HorizonExhausted, "gap " + std::to_string(i) + ": no fitting enumeration index within horizon " +
                                            std::to_string(opts.horizon));
    Rational x = en.at(*idx);
    placements.push_back(Gap{x, len, i, false, *idx});
    auto it = std::find_if(comps.begin(), comps.end(), [&](const ClosedInterval& c) { return c.contains(x); });
    ensure(it != comps.end() && x + len <= it->hi, "placed gap escapes its component");
    ClosedInterval right{x + len, it->hi};
    it->hi = x;
    comps.insert(it + 1, right);
  }
  return GapStructure(std::move(g), en.name(), depth, std::move(placements));
}

void validate_gap_structure(const GapStructure& gs) {
  auto gaps = gs.gaps();
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const Gap& a = gaps[i];
    require(a.left >= Rational(0) && a.right() <= Rational(1), "gap outside [0,1]");
    for (std::size_t j = 0; j < gaps.size(); ++j) {
      if (i == j) continue;
      const Gap& b = gaps[j];
      require(a.right() <= b.left || b.right() <= a.left, "gaps intersect");
      require(!(b.left < a.left && a.left < b.right()), "gap endpoint inside another gap");
      require(!(b.left < a.right() && a.right() < b.right()), "gap endpoint inside another gap");
    }
  }
  require(gs.gap_set().in_complement(Rational(0)) && gs.gap_set().in_complement(Rational(1)),
          "0 and 1 must stay in the complement");
  Rational total = 0;
  for (const auto& g : gaps) total += g.length;
  require(total <= Rational(1) - gs.gamma().eps0(), "gap lengths exceed 1 - eps0");
  require(complement_measure_bound(gs) >= gs.gamma().eps0(), "measure bound below eps0");
}

Rational complement_measure_bound(const GapStructure& gs) {
  Rational m = gs.gap_set().complement_measure();
  // terms materialized past the depth are not placed but may be later
  for (std::size_t i = static_cast<std::size_t>(gs.depth()) + 1; i <= gs.gamma().size(); ++i) m -= gs.gamma().term(i);
  return m - gs.gamma().tail_bound();
}

PairCheck consecutive_pair_check(const GapSet& gs, const Rational& x, const Rational& y) {
  require(x < y, "consecutive_pair_check needs x < y");
  require(gs.in_complement(x), x.str() + " is not in the complement");
  require(gs.in_complement(y), y.str() + " is not in the complement");
  if (const Gap* g = gs.gap_between(x, y)) return *g;
  for (const auto& c : gs.components()) {
    Rational lo = std::max(c.lo, x), hi = std::min(c.hi, y);
    if (lo < hi) return (lo + hi) / Rational(2);
    if (lo == hi && x < lo && lo < y) return lo;
  }
  fail(ErrorKind::Internal, "no gap and no complement point between " + x.str() + " and " + y.str());
}

PairCheck consecutive_pair_check(const GapStructure& gs, const Rational& x, const Rational& y) {
  return consecutive_pair_check(gs.gap_set(), x, y);
}

std::optional<int> refinement_witness(const GammaSequence& gamma, const RationalEnumeration& en,
                                      const Rational& a, const Rational& b, int max_depth,
                                      const BuildOptions& opts) {
  require(Rational(0) <= a && a < b && b <= Rational(1), "refinement_witness needs 0 <= a < b <= 1");
  GapStructure gs = build_gaps(gamma, en, max_depth, opts);
  for (const auto& g : gs.placements())
    if (!g.empty && g.left < b && a < g.right()) return g.source_index;
  return std::nullopt;
}

}  // namespace lipgap
