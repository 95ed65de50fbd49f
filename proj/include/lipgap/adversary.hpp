#pragma once

#include <span>
#include <string>
#include <vector>

#include "lipgap/gap_structure.hpp"
#include "lipgap/intervals.hpp"
#include "lipgap/lipschitz_maps.hpp"

namespace lipgap {

struct SweepChain {
  int target_family_index = 0;             // 1-based member the chain runs in
  std::vector<int> sigma;                  // ordering of 1..i
  std::vector<int> n_values;               // n_0 = 1, then one index per entry of sigma
  std::vector<OpenIntervalUnion> sweep_sets;  // accumulated sweep after each entry

  int n_sigma() const { return n_values.back(); }
};

// Walks sigma through the target's gaps: each step sweeps the current gap by
// K gamma*_j and moves to the first later nonempty gap that escapes the sweep.
SweepChain sweep_chain(const GapStructure& target, int target_index, std::span<const int> sigma,
                       std::span<const Rational> gamma_star, const Rational& K);

struct AdversaryStep {
  int index = 0;    // the gamma* term defined by this step (2..N)
  int n_omega = 0;
  Rational bound;   // 2^-(i+2) K^-1 eps0 gamma^{i+1}_{n_omega}
  int halvings = 0;  // beyond the initial halving of the bound
  int target_depth = 0;
  std::vector<SweepChain> chains;
};

struct AdversaryPrefix {
  Rational K;
  Rational eps0;
  std::string enumeration;
  std::vector<GammaSequence> family;
  std::vector<Rational> gamma_star;
  std::vector<AdversaryStep> steps;  // steps[k] defines gamma_star[k+1]

  int n_omega_for(int member) const { return member <= 1 ? 1 : steps.at(member - 2).n_omega; }
};

struct AdversaryOptions {
  int initial_depth = 8;
  int depth_cap = 4096;
  int max_halvings = 512;
  unsigned threads = 1;
  BuildOptions build;
};

AdversaryPrefix construct_gamma_star(const std::vector<GammaSequence>& family, const Rational& K,
                                     const Rational& eps0, const RationalEnumeration& en,
                                     const AdversaryOptions& opts = {});

// Re-checks the construction's inequalities; returns one line per violation.
std::vector<std::string> audit_prefix(const AdversaryPrefix& prefix, const BuildOptions& build = {});

struct DefeatVerdict {
  int member = 0;
  bool feasible = false;
  int domain_depth = 0;
  int codomain_depth = 0;
  FeasibilityResult result;
};

std::vector<DefeatVerdict> verify_prefix_defeat(const AdversaryPrefix& prefix, const GeometricTail& tail,
                                                int depth_domain, int depth_codomain,
                                                const BuildOptions& build = {});

// Negative control: gamma* replaced by the first N terms of one member.
AdversaryPrefix sabotage_with_member(const AdversaryPrefix& prefix, int member);

}  // namespace lipgap
