#pragma once

#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lipgap/gap_structure.hpp"
#include "lipgap/rational.hpp"

namespace lipgap {

struct GluedPoint {
  enum class Tag { Base0, Base1, Inner };
  Tag tag = Tag::Base0;
  std::string sheet;  // Inner only
  Rational x;         // Inner only, strictly inside (0,1)

  static GluedPoint base0() { return {}; }
  static GluedPoint base1() { return {Tag::Base1, {}, Rational(1)}; }
  static GluedPoint inner(std::string sheet, Rational x) { return {Tag::Inner, std::move(sheet), std::move(x)}; }

  // 0 for Base0, 1 for Base1, x otherwise
  Rational coordinate() const;
  friend bool operator==(const GluedPoint&, const GluedPoint&) = default;
};

// Copies of the unit interval minus gaps, all sharing the endpoints 0 and 1.
class GluedSpace {
 public:
  GluedSpace() = default;
  explicit GluedSpace(std::map<std::string, GapStructure> sheets);

  const std::map<std::string, GapStructure>& sheets() const { return sheets_; }
  const GapStructure& sheet(const std::string& id) const;  // UnknownSheet if missing
  bool has_sheet(const std::string& id) const { return sheets_.count(id) != 0; }

  // Precondition unless p is a point of the space
  void validate(const GluedPoint& p) const;

 private:
  std::map<std::string, GapStructure> sheets_;
};

Rational glued_distance(const GluedPoint& p, const GluedPoint& q, const GluedSpace& space);

GluedPoint embed(const Rational& x, const std::string& sheet, const GluedSpace& space);

struct CollapseEntry {
  Rational x;
  GluedPoint image;
};

struct CollapseResult {
  Rational P, Q;
  std::string n0;
  std::vector<std::pair<Rational, Rational>> f0;  // (x, F0(x)) for every x in the table
};

// The input table broke the Lipschitz bound at (x, y): lhs = d(R x, R y) > rhs = K|x - y|.
struct CollapseRejection {
  Rational x, y, lhs, rhs;
};

using CollapseOutcome = std::variant<CollapseResult, CollapseRejection>;

// Table R0 on sample points of the domain sheet's complement, folded into one
// target sheet. All infima of the continuous construction range over the table.
CollapseOutcome collapse_map(std::vector<CollapseEntry> table, const Rational& K, const std::string& domain_sheet,
                             const GluedSpace& space);

}  // namespace lipgap
