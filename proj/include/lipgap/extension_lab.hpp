#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lipgap/rational.hpp"

namespace lipgap {

// Points are addressed by index; ids are kept for files and reports.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace(std::vector<std::string> ids, std::vector<std::vector<Rational>> dist, int base = 0);

  int size() const { return static_cast<int>(ids_.size()); }
  int base() const { return base_; }
  const std::string& id(int i) const { return ids_.at(i); }
  int index_of(const std::string& id) const;  // Precondition if unknown
  const std::vector<std::string>& ids() const { return ids_; }
  const Rational& d(int i, int j) const { return dist_[i][j]; }
  double dd(int i, int j) const { return approx_[i * size() + j]; }

  // min over points c of max over s in S of d(c, s)
  Rational radius(const std::vector<int>& S) const;
  Rational separation(const std::vector<int>& S) const;  // min pairwise distance; 0 for |S| < 2
  bool separated(const std::vector<int>& S, const Rational& eps) const;

 private:
  std::vector<std::string> ids_;
  std::vector<std::vector<Rational>> dist_;
  std::vector<double> approx_;
  int base_;
};

using FunctionTable = std::vector<Rational>;  // one value per point

struct LipschitzSample {
  std::map<int, Rational> table;
  Rational L;
};

Rational lipschitz_constant(const FiniteMetricSpace& M, const std::map<int, Rational>& f);
Rational lipschitz_constant(const FiniteMetricSpace& M, const FunctionTable& f);

// f^(x) = min over the table of f(y) + L d(x, y)
FunctionTable mcshane_extend(const FiniteMetricSpace& M, const LipschitzSample& f);

enum class ConeSign { Positive, Negative };

FunctionTable cone_function(const FiniteMetricSpace& M, int x0, const Rational& value, const Rational& lam,
                            const Rational& eps, ConeSign sign);

struct NormingResult {
  FunctionTable g;
  Rational constant;  // lam (1 + eps)
  bool agrees_on_F = false, vanishes_at_base = false, support_in_balls = false, lipschitz_ok = false;
  bool ok() const { return agrees_on_F && vanishes_at_base && support_in_balls && lipschitz_ok; }
};

// f total with Lip(f) <= 1 and f(base) = 0; F must contain the base point.
NormingResult norming_function(const FiniteMetricSpace& M, const FunctionTable& f, std::vector<int> F,
                               const Rational& lam, const Rational& eps);

struct NetOptions {
  std::uint64_t max_candidates = 2000000;
  std::optional<std::vector<int>> universe;  // restrict E to these points (F is always allowed)
};

struct NetResult {
  std::vector<int> F;                    // ascending
  int k = 0;
  Rational eps;
  Rational radius;                       // eps^2
  std::vector<std::vector<int>> centers;  // each: F then its extras, extras ascending
  std::vector<int> Z;                     // ascending
  std::uint64_t candidates = 0;           // number of admissible E enumerated
};

NetResult finite_net(const FiniteMetricSpace& M, std::vector<int> F, int k, const Rational& eps,
                     const NetOptions& opts = {});

struct LocalMap {
  std::vector<std::pair<int, int>> pairs;  // E point -> Z point
  int center = -1;                         // index into net.centers
  Rational lip;                            // exact Lipschitz constant of the pairing (1 when |E| < 2)
};

LocalMap local_map(const FiniteMetricSpace& M, std::vector<int> E, const NetResult& net);

// every admissible E of the net's problem, in enumeration order
std::vector<std::vector<int>> admissible_sets(const FiniteMetricSpace& M, const NetResult& net,
                                              const NetOptions& opts = {});

struct SeparatedChain {
  std::vector<std::vector<int>> F_chain;
  std::vector<Rational> eps_chain;
  std::vector<std::vector<int>> D_chain;
};

SeparatedChain separated_chain(const FiniteMetricSpace& M, std::vector<std::vector<int>> F_chain,
                               std::vector<Rational> eps_chain);

// Re-checks inclusions, separation of D_n with every later F, and that every
// point left out of the last D is within the finest eps of it. Empty when fine.
std::vector<std::string> audit_separated_chain(const FiniteMetricSpace& M, const SeparatedChain& c);

struct ExtensionOperator {
  std::vector<int> p_sequence;
  std::vector<std::vector<int>> F_chain, S_chain;  // S_chain[0] = {base}
  std::vector<Rational> theta, eps, radius, R;     // per level 1..N
  SeparatedChain D;
  std::vector<int> E_max;
  bool unique_maximum = false;     // E_max contains every member of the last level's family
  std::vector<int> assignment;     // L~(p) for every point: L(p) on E_max, the base elsewhere
  Rational certificate;            // 1 + eps_N
  Rational map_lipschitz;          // exact Lip of L on E_max

  std::vector<int> S_union() const;
  // (Tf)(p) = f(L~(p)); f is given on S_union (other entries are ignored)
  FunctionTable apply(const FunctionTable& f) const;
};

// p_sequence lists p_1..p_N; a prebuilt chain must match the recursion or ChainMismatch is thrown.
ExtensionOperator extension_operator(const FiniteMetricSpace& M, const std::vector<int>& p_sequence,
                                     const std::optional<SeparatedChain>& D = std::nullopt,
                                     const NetOptions& opts = {});

}  // namespace lipgap
