#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lipgap/enumeration.hpp"
#include "lipgap/rational.hpp"

namespace lipgap {

// gamma_{m+1} = gamma_m * ratio, and so on
struct GeometricTail {
  Rational ratio;
  friend bool operator==(const GeometricTail&, const GeometricTail&) = default;
};

class GammaSequence {
 public:
  GammaSequence() : GammaSequence(Rational(1, 4), {}, Rational(0)) {}
  GammaSequence(Rational eps0, std::vector<Rational> terms, Rational tail_bound,
                std::optional<GeometricTail> tail_rule = std::nullopt);

  // terms followed by a geometric continuation; the tail bound is its exact sum
  static GammaSequence with_geometric_tail(Rational eps0, std::vector<Rational> terms, Rational ratio);
  static GammaSequence geometric(Rational eps0, Rational first, Rational ratio, std::size_t materialized);

  const Rational& eps0() const { return eps0_; }
  std::span<const Rational> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  const Rational& term(std::size_t i) const;  // 1-based
  const Rational& tail_bound() const { return tail_bound_; }
  const std::optional<GeometricTail>& tail_rule() const { return tail_rule_; }

  bool can_extend_to(std::size_t m) const { return m <= terms_.size() || tail_rule_.has_value(); }
  GammaSequence extended(std::size_t m) const;

  friend bool operator==(const GammaSequence&, const GammaSequence&) = default;

 private:
  Rational eps0_;
  std::vector<Rational> terms_;
  Rational tail_bound_;
  std::optional<GeometricTail> tail_rule_;
};

struct Gap {
  Rational left;
  Rational length;
  int source_index = 0;
  bool empty = false;
  std::uint64_t enumeration_index = 0;  // n_i, 0 when empty

  Rational right() const { return left + length; }
  friend bool operator==(const Gap&, const Gap&) = default;
};

// A finite union of disjoint open gaps in (0,1); the complement is what maps live on.
class GapSet {
 public:
  GapSet() = default;
  explicit GapSet(std::vector<Gap> gaps);  // empty-flagged entries are dropped

  std::span<const Gap> gaps() const { return gaps_; }
  std::size_t size() const { return gaps_.size(); }

  // maximal closed intervals of [0,1] minus the gaps, possibly degenerate
  std::vector<ClosedInterval> components() const;
  bool in_complement(const Rational& x) const;
  const Gap* gap_containing(const Rational& x) const;  // x strictly inside
  const Gap* gap_between(const Rational& x, const Rational& y) const;
  Rational complement_measure() const;

 private:
  std::vector<Gap> gaps_;  // sorted by left
};

class GapStructure {
 public:
  GapStructure(GammaSequence gamma, std::string enumeration, int depth, std::vector<Gap> placements);

  const GammaSequence& gamma() const { return gamma_; }
  const std::string& enumeration() const { return enumeration_; }
  int depth() const { return depth_; }
  std::span<const Gap> placements() const { return placements_; }  // by source index
  const GapSet& gap_set() const { return set_; }
  std::span<const Gap> gaps() const { return set_.gaps(); }
  const Gap* gap_by_source(int i) const;  // null if empty or out of range

 private:
  GammaSequence gamma_;
  std::string enumeration_;
  int depth_;
  std::vector<Gap> placements_;
  GapSet set_;
};

struct BuildOptions {
  std::uint64_t horizon = 100000;
};

GapStructure build_gaps(const GammaSequence& gamma, const RationalEnumeration& en, int depth,
                        const BuildOptions& opts = {});

// Throws Precondition describing the first violated structural invariant.
void validate_gap_structure(const GapStructure& gs);

Rational complement_measure_bound(const GapStructure& gs);

using PairCheck = std::variant<Gap, Rational>;  // the gap (x,y), or a complement point inside (x,y)
PairCheck consecutive_pair_check(const GapStructure& gs, const Rational& x, const Rational& y);
PairCheck consecutive_pair_check(const GapSet& gs, const Rational& x, const Rational& y);

std::optional<int> refinement_witness(const GammaSequence& gamma, const RationalEnumeration& en,
                                      const Rational& a, const Rational& b, int max_depth,
                                      const BuildOptions& opts = {});

}  // namespace lipgap
