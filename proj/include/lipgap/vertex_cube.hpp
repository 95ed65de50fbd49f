#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lipgap/rational.hpp"

namespace lipgap {

// Coordinates are labelled 1..lambda throughout (sets A, beta0, component labels).

struct SheetSpec {
  std::vector<Rational> gamma;  // every entry in (0, 1/2)

  explicit SheetSpec(std::vector<Rational> g);
  int lambda() const { return static_cast<int>(gamma.size()); }
  friend bool operator==(const SheetSpec&, const SheetSpec&) = default;
};

struct CubePoint {
  enum class Tag { Vertex, Inner };
  Tag tag = Tag::Vertex;
  std::vector<int> A;              // Vertex: sorted labels with coordinate 1
  std::string sheet;               // Inner
  std::vector<Rational> coords;    // Inner

  static CubePoint vertex(std::vector<int> A);
  static CubePoint inner(std::string sheet, std::vector<Rational> coords);
  // the vertex itself when every coordinate is 0 or 1
  static CubePoint make(std::string sheet, std::vector<Rational> coords);

  std::vector<Rational> position(int lambda) const;
  friend bool operator==(const CubePoint&, const CubePoint&) = default;
};

class CubeSpace {
 public:
  CubeSpace(int lambda, std::map<std::string, SheetSpec> sheets);

  int lambda() const { return lambda_; }
  const std::map<std::string, SheetSpec>& sheets() const { return sheets_; }
  const SheetSpec& sheet(const std::string& id) const;
  void validate(const CubePoint& p) const;

 private:
  int lambda_;
  std::map<std::string, SheetSpec> sheets_;
};

bool membership(const std::vector<Rational>& p, const SheetSpec& sheet);
std::vector<int> component_of(const CubePoint& p);

Rational sup_distance(const std::vector<Rational>& p, const std::vector<Rational>& q);
Rational cube_distance(const CubePoint& p, const CubePoint& q, const CubeSpace& space);
// min over all 2^lambda vertices of d(p, e_A) + d(e_A, q); lambda <= 20
Rational cube_distance_brute(const CubePoint& p, const CubePoint& q, const CubeSpace& space);

struct DefeatWitness {
  Rational K;
  std::vector<SheetSpec> family;  // member beta has sheet id "f<beta>"
  SheetSpec gamma_star;           // sheet id "star"
  CubePoint p_star, q_star;
  int beta0 = 1;
  Rational bound;                 // gamma^{beta0}_{beta0} / K
  Rational distance;              // d(p*, q*)
  bool case1_holds = false;       // K d(p*,q*) < 1/2
  bool case2_holds = false;       // 2 gamma^{beta0}_{beta0} > K d(p*,q*)

  CubeSpace space() const;
  CubePoint q_star_for(int beta) const;
};

std::string family_sheet_id(int beta);

DefeatWitness defeat_family(const std::vector<SheetSpec>& family, const Rational& K,
                            std::optional<int> beta0 = std::nullopt);

struct ViolationReport {
  bool in_model = true;            // false when some table entry leaves its component
  std::vector<std::string> component_breaks;
  int proof_case = 0;              // 1: R(p*) is the origin, 2: R(p*) on a family sheet
  int beta0 = 0;
  Rational lhs;                    // d(R p*, R q*)
  Rational rhs;                    // K d(p*, q*)
  Rational chain_low;              // case 1: d(0, R q*); case 2: 2 gamma^{beta0}_{beta0}
  Rational chain_cap;              // case 1: 1/2; case 2: gamma^{beta0}_{beta0}
  bool violated = false;           // lhs > rhs
  std::string inequality;
};

using RetractionTable = std::vector<std::pair<CubePoint, CubePoint>>;

ViolationReport check_retraction_violation(const RetractionTable& R, const Rational& K, const DefeatWitness& w);

// Candidate retraction onto the family sheets: points already there stay,
// anything else goes to its nearest point of the union, which is a vertex.
RetractionTable nearest_point_retraction(const std::vector<CubePoint>& points, const DefeatWitness& w);

}  // namespace lipgap
