#pragma once

#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lipgap/extension_lab.hpp"

namespace gen {

// n distinct grid points of [0,1]^2 (step 1/den) under the sup or l1 norm
inline lipgap::FiniteMetricSpace grid_space(std::mt19937_64& rng, int n, int den, bool l1 = false) {
  std::set<std::pair<int, int>> pts{{0, 0}};
  while (static_cast<int>(pts.size()) < n)
    pts.insert({static_cast<int>(rng() % (den + 1)), static_cast<int>(rng() % (den + 1))});
  std::vector<std::pair<int, int>> v(pts.begin(), pts.end());
  std::vector<std::string> ids;
  std::vector<std::vector<lipgap::Rational>> d(n, std::vector<lipgap::Rational>(n));
  for (int i = 0; i < n; ++i) {
    ids.push_back("p" + std::to_string(i));
    for (int j = 0; j < n; ++j) {
      long long dx = std::abs(v[i].first - v[j].first), dy = std::abs(v[i].second - v[j].second);
      d[i][j] = lipgap::Rational(l1 ? dx + dy : std::max(dx, dy), den);
    }
  }
  return lipgap::FiniteMetricSpace(ids, d, 0);  // (0,0) sorts first
}

inline lipgap::FiniteMetricSpace line_space(int steps) {
  std::vector<std::string> ids;
  std::vector<std::vector<lipgap::Rational>> d(steps + 1, std::vector<lipgap::Rational>(steps + 1));
  for (int i = 0; i <= steps; ++i) {
    ids.push_back(lipgap::Rational(i, steps).str());
    for (int j = 0; j <= steps; ++j) d[i][j] = lipgap::Rational(std::abs(i - j), steps);
  }
  return lipgap::FiniteMetricSpace(ids, d, 0);
}

// random f with Lip(f) <= L exactly attained nowhere in particular, f(base) = 0
inline lipgap::FunctionTable random_lipschitz(std::mt19937_64& rng, const lipgap::FiniteMetricSpace& M,
                                              const lipgap::Rational& L) {
  lipgap::LipschitzSample s{{{M.base(), lipgap::Rational(0)}}, L};
  for (int t = 0; t < 3; ++t) {
    int p = static_cast<int>(rng() % M.size());
    if (s.table.count(p)) continue;
    auto hat = lipgap::mcshane_extend(M, s);
    lipgap::LipschitzSample low = s;
    for (auto& [k, v] : low.table) v = -v;
    auto cup = lipgap::mcshane_extend(M, low);  // -(lower envelope)
    lipgap::Rational lo = -cup[p], hi = hat[p];
    long long num = static_cast<long long>(rng() % 9);
    s.table[p] = lo + (hi - lo) * lipgap::Rational(num, 8);
  }
  return lipgap::mcshane_extend(M, s);
}

}  // namespace gen
