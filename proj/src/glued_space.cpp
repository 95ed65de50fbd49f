#include "lipgap/glued_space.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "lipgap/errors.hpp"

namespace lipgap {

Rational GluedPoint::coordinate() const {
  switch (tag) {
    case Tag::Base0: return Rational(0);
    case Tag::Base1: return Rational(1);
    default: return x;
  }
}

GluedSpace::GluedSpace(std::map<std::string, GapStructure> sheets) : sheets_(std::move(sheets)) {
  if (sheets_.empty()) return;
  const Rational& eps0 = sheets_.begin()->second.gamma().eps0();
  for (const auto& [id, gs] : sheets_) {
    require(!id.empty(), "sheet ids must be nonempty");
    require(gs.gamma().eps0() == eps0, "sheet " + id + " has a different eps0");
  }
}

const GapStructure& GluedSpace::sheet(const std::string& id) const {
  auto it = sheets_.find(id);
  if (it == sheets_.end()) fail(ErrorKind::UnknownSheet, "unknown sheet '" + id + "'");
  return it->second;
}

void GluedSpace::validate(const GluedPoint& p) const {
  if (p.tag != GluedPoint::Tag::Inner) return;
  const GapStructure& gs = sheet(p.sheet);
  require(Rational(0) < p.x && p.x < Rational(1), "inner point must lie strictly between 0 and 1");
  require(gs.gap_set().in_complement(p.x), "point " + p.x.str() + " lies in a gap of sheet " + p.sheet);
}

Rational glued_distance(const GluedPoint& p, const GluedPoint& q, const GluedSpace& space) {
  space.validate(p);
  space.validate(q);
  using T = GluedPoint::Tag;
  // Base points sit on every sheet, so only two inner points on different sheets go around.
  if (p.tag == T::Inner && q.tag == T::Inner && p.sheet != q.sheet) {
    Rational via0 = p.x + q.x;
    Rational via1 = Rational(2) - p.x - q.x;
    return std::min(via0, via1);
  }
  return abs(p.coordinate() - q.coordinate());
}

GluedPoint embed(const Rational& x, const std::string& sheet, const GluedSpace& space) {
  const GapStructure& gs = space.sheet(sheet);
  require(Rational(0) <= x && x <= Rational(1), "embed: x outside [0,1]");
  require(gs.gap_set().in_complement(x), "embed: " + x.str() + " lies in a gap of sheet " + sheet);
  if (x == Rational(0)) return GluedPoint::base0();
  if (x == Rational(1)) return GluedPoint::base1();
  return GluedPoint::inner(sheet, x);
}

namespace {

const GluedPoint kOne = GluedPoint::base1();

}  // namespace

CollapseOutcome collapse_map(std::vector<CollapseEntry> table, const Rational& K, const std::string& domain_sheet,
                             const GluedSpace& space) {
  require(K > Rational(0), "collapse: K must be positive");
  std::sort(table.begin(), table.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
  for (std::size_t i = 1; i < table.size(); ++i)
    require(table[i].x != table[i - 1].x, "collapse: duplicate sample " + table[i].x.str());
  require(table.size() >= 2 && table.front().x == Rational(0) && table.back().x == Rational(1),
          "collapse: table must contain 0 and 1");
  require(table.front().image.tag == GluedPoint::Tag::Base0 && table.back().image.tag == GluedPoint::Tag::Base1,
          "collapse: 0 and 1 must map to the base points");
  const GapStructure& dom = space.sheet(domain_sheet);
  for (const auto& e : table) {
    require(dom.gap_set().in_complement(e.x), "collapse: sample " + e.x.str() + " lies in a domain gap");
    space.validate(e.image);
  }

  const std::size_t n = table.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Rational lhs = glued_distance(table[i].image, table[j].image, space);
      Rational rhs = K * (table[j].x - table[i].x);
      if (lhs > rhs) return CollapseRejection{table[i].x, table[j].x, lhs, rhs};
    }

  auto to_one = [&](std::size_t k) { return glued_distance(table[k].image, kOne, space); };

  // Smallest y > x (as a table index) witnessing x in Delta_0, with the sheet
  // that [x, y) lands in ("" when only base points occur).
  auto witness = [&](std::size_t i) -> std::optional<std::pair<std::size_t, std::string>> {
    std::string sheet;
    for (std::size_t j = i + 1; j < n; ++j) {
      const GluedPoint& last = table[j - 1].image;
      if (last.tag == GluedPoint::Tag::Inner) {
        if (sheet.empty()) sheet = last.sheet;
        else if (sheet != last.sheet) return std::nullopt;  // mixed sheets only get worse
      }
      bool ok = true;
      Rational dy = to_one(j);
      for (std::size_t z = i; z < j && ok; ++z) ok = to_one(z) + dy <= K * (table[j].x - table[z].x);
      if (ok) return std::make_pair(j, sheet);
    }
    return std::nullopt;
  };

  std::size_t p = n - 1, q = n - 1;
  std::string n0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (auto w = witness(i)) {
      p = i;
      q = w->first;
      n0 = w->second;
      break;
    }
  }
  if (n0.empty()) {
    // only base points in [P, Q): any target sheet works; prefer one the table uses
    for (const auto& e : table)
      if (e.image.tag == GluedPoint::Tag::Inner) {
        n0 = e.image.sheet;
        break;
      }
    if (n0.empty()) {
      for (const auto& [id, gs] : space.sheets())
        if (id != domain_sheet) {
          n0 = id;
          break;
        }
    }
    if (n0.empty()) n0 = domain_sheet;
  }

  CollapseResult out{table[p].x, table[q].x, n0, {}};
  for (std::size_t k = 0; k < n; ++k) {
    Rational v = k < p ? Rational(0) : (k < q ? table[k].image.coordinate() : Rational(1));
    out.f0.emplace_back(table[k].x, v);
  }

  // The finite case analysis guarantees these; a failure is a bug.
  const GapSet& target = space.sheet(n0).gap_set();
  for (std::size_t i = 0; i < n; ++i) {
    ensure(target.in_complement(out.f0[i].second), "collapse: F0 value outside the target sheet");
    for (std::size_t j = i + 1; j < n; ++j)
      ensure(abs(out.f0[j].second - out.f0[i].second) <= K * (out.f0[j].first - out.f0[i].first),
             "collapse: F0 not K-Lipschitz at " + out.f0[i].first.str() + ", " + out.f0[j].first.str());
  }
  ensure(out.f0.front().second == Rational(0) && out.f0.back().second == Rational(1), "collapse: F0 moves 0 or 1");
  return out;
}

}  // namespace lipgap
