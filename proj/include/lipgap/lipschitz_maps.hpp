#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lipgap/gap_structure.hpp"
#include "lipgap/rational.hpp"

namespace lipgap {

struct Breakpoint {
  Rational x, y;
  friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

// Nondecreasing piecewise-linear map given by its breakpoints; linear in between.
class MonotonePLMap {
 public:
  MonotonePLMap() : points_{{Rational(0), Rational(0)}}, K_(1) {}
  MonotonePLMap(std::vector<Breakpoint> points, Rational K);

  std::span<const Breakpoint> points() const { return points_; }
  const Rational& K() const { return K_; }
  Rational operator()(const Rational& x) const;

  // Throws Precondition unless every domain point is sent into the codomain
  // complement without any component's image straddling a codomain gap.
  void validate_against(const GapSet& domain, const GapSet& codomain) const;

 private:
  std::vector<Breakpoint> points_;
  Rational K_;
};

// max |y_i - y_j| / |x_i - x_j| over all pairs
Rational lipschitz_constant(std::span<const Breakpoint> samples);

MonotonePLMap monotonize(std::vector<Breakpoint> samples);

struct FeasibilityResult {
  bool feasible = false;
  MonotonePLMap max_map;
  Rational terminal_value;
  std::vector<Rational> blocking_chain;
};

FeasibilityResult max_feasible_map(const GapSet& domain, const GapSet& codomain, const Rational& K);
FeasibilityResult max_feasible_map(const GapStructure& domain, const GapStructure& codomain, const Rational& K);

struct JumpCertificate {
  Gap codomain_gap;
  Gap domain_gap;
  Rational p_minus, p_plus, x_minus, y_plus;
};

std::vector<JumpCertificate> jump_certificates(const MonotonePLMap& F, const GapSet& domain,
                                               const GapSet& codomain);

// certificates partitioned by their domain gap, in order of first appearance
std::vector<std::vector<JumpCertificate>> group_by_domain_gap(std::span<const JumpCertificate> certs);

Rational jump_spread(std::span<const JumpCertificate> group);
bool check_jump_length(std::span<const JumpCertificate> group, const Rational& K);

struct SweepInterval {
  Rational a, b, r;
  std::optional<std::pair<Rational, Rational>> interval;  // (b - r, a + r) when nonempty

  bool empty() const { return !interval.has_value(); }
  Rational length() const { return interval ? interval->second - interval->first : Rational(0); }
  bool contains(const Rational& lo, const Rational& hi) const {
    return interval && interval->first <= lo && hi <= interval->second;
  }
};

SweepInterval sweeping(const Rational& a, const Rational& b, const Rational& r);
bool sweep_escape_check(const JumpCertificate& c1, const JumpCertificate& c2, const Rational& r,
                        const Rational& K);

}  // namespace lipgap
