#include <gtest/gtest.h>

#include <random>
#include <set>

#include "lipgap/errors.hpp"
#include "lipgap/glued_space.hpp"

using namespace lipgap;

namespace {

const Rational kEps(1, 4);

GapStructure sheet(Rational first, int depth) {
  return build_gaps(GammaSequence::geometric(kEps, first, Rational(1, 2), depth), RationalEnumeration(), depth);
}

GluedSpace three_sheets() {
  std::map<std::string, GapStructure> m;
  m.emplace("star", sheet(Rational(1, 100), 3));
  m.emplace("a", sheet(Rational(1, 50), 4));
  m.emplace("b", sheet(Rational(1, 64), 5));
  return GluedSpace(std::move(m));
}

Rational random_point(std::mt19937_64& rng, const GapStructure& gs) {
  for (;;) {
    long long den = std::uniform_int_distribution<long long>(2, 24)(rng);
    long long num = std::uniform_int_distribution<long long>(0, den)(rng);
    Rational x(num, den);
    if (gs.gap_set().in_complement(x)) return x;
  }
}

GluedPoint random_glued(std::mt19937_64& rng, const GluedSpace& sp) {
  std::vector<std::string> ids;
  for (const auto& kv : sp.sheets()) ids.push_back(kv.first);
  const std::string& id = ids[rng() % ids.size()];
  return embed(random_point(rng, sp.sheet(id)), id, sp);
}

}  // namespace

TEST(GluedSpace, DistanceExamples) {
  auto sp = three_sheets();
  EXPECT_EQ(glued_distance(GluedPoint::base0(), GluedPoint::base1(), sp), Rational(1));
  auto p = embed(Rational(1, 4), "a", sp), q = embed(Rational(1, 4), "b", sp);
  EXPECT_EQ(glued_distance(p, q, sp), Rational(1, 2));
  EXPECT_EQ(glued_distance(p, p, sp), Rational(0));
  EXPECT_EQ(glued_distance(p, GluedPoint::base1(), sp), Rational(3, 4));
  auto r = embed(Rational(9, 10), "a", sp), s = embed(Rational(4, 5), "b", sp);
  EXPECT_EQ(glued_distance(r, s, sp), Rational(3, 10));
}

TEST(GluedSpace, EmbedContract) {
  auto sp = three_sheets();
  EXPECT_EQ(embed(Rational(0), "a", sp), GluedPoint::base0());
  EXPECT_EQ(embed(Rational(1), "b", sp), GluedPoint::base1());
  EXPECT_THROW(embed(Rational(1, 200), "star", sp), Error);  // inside (0, 1/100)
  try {
    embed(Rational(1, 2), "nope", sp);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownSheet);
  }
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    Rational x = random_point(rng, sp.sheet("a")), y = random_point(rng, sp.sheet("a"));
    EXPECT_EQ(glued_distance(embed(x, "a", sp), embed(y, "a", sp), sp), abs(x - y));
    if (x > Rational(0) && x < Rational(1) && sp.sheet("b").gap_set().in_complement(x)) {
      Rational d = glued_distance(embed(x, "a", sp), embed(x, "b", sp), sp);
      EXPECT_EQ(d, std::min(Rational(2) * x, Rational(2) * (Rational(1) - x)));
    }
  }
}

TEST(GluedSpace, MetricAxioms) {
  auto sp = three_sheets();
  std::mt19937_64 rng(11);
  for (int t = 0; t < 2000; ++t) {
    auto p = random_glued(rng, sp), q = random_glued(rng, sp), r = random_glued(rng, sp);
    Rational pq = glued_distance(p, q, sp), qr = glued_distance(q, r, sp), pr = glued_distance(p, r, sp);
    EXPECT_EQ(pq, glued_distance(q, p, sp));
    EXPECT_EQ(pq.is_zero(), p == q);
    EXPECT_LE(pr, pq + qr);
  }
}

TEST(Collapse, SingleSheetStartsAtZero) {
  auto sp = three_sheets();
  std::vector<CollapseEntry> t{{Rational(0), GluedPoint::base0()},
                               {Rational(1, 2), GluedPoint::inner("a", Rational(1, 2))},
                               {Rational(1), GluedPoint::base1()}};
  auto out = std::get<CollapseResult>(collapse_map(t, Rational(1), "star", sp));
  EXPECT_EQ(out.P, Rational(0));
  EXPECT_EQ(out.Q, Rational(1));
  EXPECT_EQ(out.n0, "a");
  EXPECT_EQ(out.f0[1].second, Rational(1, 2));
}

TEST(Collapse, EndpointOnlyTable) {
  auto sp = three_sheets();
  std::vector<CollapseEntry> t{{Rational(0), GluedPoint::base0()}, {Rational(1), GluedPoint::base1()}};
  auto out = std::get<CollapseResult>(collapse_map(t, Rational(1), "star", sp));
  // 0 already qualifies with y = 1, so P = 0 here; the table is the endpoint map either way
  EXPECT_EQ(out.P, Rational(0));
  EXPECT_EQ(out.Q, Rational(1));
  EXPECT_EQ(out.f0.front().second, Rational(0));
  EXPECT_EQ(out.f0.back().second, Rational(1));
}

TEST(Collapse, SixPointTwoSheetGolden) {
  auto sp = three_sheets();
  std::vector<CollapseEntry> t{{Rational(0), GluedPoint::base0()},
                               {Rational(3, 10), GluedPoint::inner("a", Rational(1, 5))},
                               {Rational(2, 5), GluedPoint::inner("b", Rational(1, 5))},
                               {Rational(3, 5), GluedPoint::inner("b", Rational(1, 2))},
                               {Rational(4, 5), GluedPoint::inner("b", Rational(3, 4))},
                               {Rational(1), GluedPoint::base1()}};
  auto out = std::get<CollapseResult>(collapse_map(t, Rational(4), "star", sp));
  EXPECT_EQ(out.P, Rational(2, 5));
  EXPECT_EQ(out.Q, Rational(4, 5));
  EXPECT_EQ(out.n0, "b");
  std::vector<Rational> want{0, 0, Rational(1, 5), Rational(1, 2), 1, 1};
  for (std::size_t k = 0; k < want.size(); ++k) EXPECT_EQ(out.f0[k].second, want[k]) << k;
}

TEST(Collapse, RejectsNonLipschitzTable) {
  auto sp = three_sheets();
  std::vector<CollapseEntry> t{{Rational(0), GluedPoint::base0()},
                               {Rational(1, 2), GluedPoint::inner("a", Rational(9, 10))},
                               {Rational(1), GluedPoint::base1()}};
  auto rej = std::get<CollapseRejection>(collapse_map(t, Rational(1), "star", sp));
  EXPECT_EQ(rej.x, Rational(0));
  EXPECT_EQ(rej.y, Rational(1, 2));
  EXPECT_EQ(rej.lhs, Rational(9, 10));
  EXPECT_EQ(rej.rhs, Rational(1, 2));
}

TEST(Collapse, RandomTablesAreSound) {
  auto sp = three_sheets();
  std::mt19937_64 rng(2024);
  int nontrivial = 0;
  for (int t = 0; t < 400; ++t) {
    std::set<Rational> xs{Rational(0), Rational(1)};
    int extra = 1 + static_cast<int>(rng() % 7);
    while (static_cast<int>(xs.size()) < extra + 2) xs.insert(random_point(rng, sp.sheet("star")));
    std::vector<CollapseEntry> table;
    for (const auto& x : xs) {
      GluedPoint img = x == Rational(0)   ? GluedPoint::base0()
                       : x == Rational(1) ? GluedPoint::base1()
                                          : random_glued(rng, sp);
      table.push_back({x, img});
    }
    Rational K = 1;
    for (std::size_t i = 0; i < table.size(); ++i)
      for (std::size_t j = i + 1; j < table.size(); ++j)
        K = std::max(K, glued_distance(table[i].image, table[j].image, sp) / (table[j].x - table[i].x));
    auto out = collapse_map(table, K, "star", sp);
    ASSERT_TRUE(std::holds_alternative<CollapseResult>(out));
    const auto& r = std::get<CollapseResult>(out);
    if (r.P > Rational(0)) ++nontrivial;
    for (std::size_t i = 0; i < r.f0.size(); ++i)
      for (std::size_t j = i + 1; j < r.f0.size(); ++j)
        EXPECT_LE(abs(r.f0[j].second - r.f0[i].second), K * (r.f0[j].first - r.f0[i].first));
  }
  EXPECT_GT(nontrivial, 10);
}
