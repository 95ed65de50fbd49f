#include "lipgap/enumeration.hpp"

#include <algorithm>
#include <numeric>

#include "lipgap/errors.hpp"

namespace lipgap {

namespace {

using u64 = std::uint64_t;

u64 totient(u64 n) {
  u64 result = n;
  for (u64 p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

// sum of phi(d) for 2 <= d <= n
u64 totient_sum(u64 n) {
  if (n < 2) return 0;
  if (n <= 4096) {
    u64 s = 0;
    for (u64 d = 2; d <= n; ++d) s += totient(d);
    return s;
  }
  if (n > 50'000'000) fail(ErrorKind::Guard, "index lookup denominator too large");
  std::vector<std::uint32_t> phi(n + 1);
  std::iota(phi.begin(), phi.end(), 0u);
  for (u64 p = 2; p <= n; ++p) {
    if (phi[p] != p) continue;
    for (u64 m = p; m <= n; m += p) phi[m] -= phi[m] / p;
  }
  u64 s = 0;
  for (u64 d = 2; d <= n; ++d) s += phi[d];
  return s;
}

// Visits the enumeration in order until fn returns true or `limit` entries were seen.
template <class Fn>
void walk(RationalEnumeration::Order order, u64 limit, Fn&& fn) {
  if (limit >= 1 && fn(u64{1}, u64{0}, u64{1})) return;
  if (limit >= 2 && fn(u64{2}, u64{1}, u64{1})) return;
  u64 idx = 2;
  if (order == RationalEnumeration::Order::DenominatorNumerator) {
    for (u64 q = 2; idx < limit; ++q)
      for (u64 p = 1; p < q && idx < limit; ++p)
        if (std::gcd(p, q) == 1 && fn(++idx, p, q)) return;
    return;
  }
  std::vector<std::pair<u64, u64>> row{{0, 1}, {1, 1}};
  while (idx < limit) {
    std::vector<std::pair<u64, u64>> next;
    next.reserve(row.size() * 2);
    for (std::size_t i = 0; i + 1 < row.size(); ++i) {
      next.push_back(row[i]);
      std::pair<u64, u64> m{row[i].first + row[i + 1].first, row[i].second + row[i + 1].second};
      next.push_back(m);
      if (idx < limit && fn(++idx, m.first, m.second)) return;
    }
    next.push_back(row.back());
    row.swap(next);
  }
}

}  // namespace

bool in_any(std::span<const ClosedInterval> sorted, const Rational& x) {
  auto it = std::upper_bound(sorted.begin(), sorted.end(), x,
                             [](const Rational& v, const ClosedInterval& c) { return v < c.lo; });
  if (it == sorted.begin()) return false;
  return std::prev(it)->contains(x);
}

RationalEnumeration RationalEnumeration::from_name(std::string_view name) {
  if (name == "denominator-numerator") return RationalEnumeration(Order::DenominatorNumerator);
  if (name == "stern-brocot") return RationalEnumeration(Order::SternBrocot);
  fail(ErrorKind::Parse, "unknown enumeration '" + std::string(name) + "'");
}

std::string RationalEnumeration::name() const {
  return order_ == Order::DenominatorNumerator ? "denominator-numerator" : "stern-brocot";
}

Rational RationalEnumeration::at(std::uint64_t index) const {
  require(index >= 1, "enumeration index is 1-based");
  if (index == 1) return Rational(0);
  if (index == 2) return Rational(1);
  if (order_ == Order::DenominatorNumerator) {
    u64 r = index - 2;
    for (u64 q = 2;; ++q) {
      u64 phi = totient(q);
      if (r > phi) {
        r -= phi;
        continue;
      }
      for (u64 p = 1; p < q; ++p)
        if (std::gcd(p, q) == 1 && --r == 0)
          return Rational(static_cast<long long>(p), static_cast<long long>(q));
    }
  }
  u64 m = index - 2;
  int level = 0;
  while ((m >> level) > 1) ++level;  // m in [2^level, 2^(level+1))
  u64 pos = m - (u64{1} << level);
  mpz_class ln = 0, ld = 1, hn = 1, hd = 1;
  for (int b = level - 1; b >= 0; --b) {
    mpz_class mn = ln + hn, md = ld + hd;
    if ((pos >> b) & 1) {
      ln = mn;
      ld = md;
    } else {
      hn = mn;
      hd = md;
    }
  }
  return Rational(mpz_class(ln + hn), mpz_class(ld + hd));
}

std::uint64_t RationalEnumeration::index_of(const Rational& q) const {
  require(q >= Rational(0) && q <= Rational(1), "index_of: value outside [0,1]");
  if (q == Rational(0)) return 1;
  if (q == Rational(1)) return 2;
  if (order_ == Order::DenominatorNumerator) {
    mpz_class d = q.den();
    if (!d.fits_ulong_p() || d.get_ui() > 50'000'000) fail(ErrorKind::Guard, "index lookup denominator too large");
    u64 den = d.get_ui(), num = q.num().get_ui();
    u64 rank = 0;
    for (u64 p = 1; p <= num; ++p)
      if (std::gcd(p, den) == 1) ++rank;
    return 2 + totient_sum(den - 1) + rank;
  }
  mpz_class ln = 0, ld = 1, hn = 1, hd = 1;
  u64 pos = 0;
  for (int level = 0; level < 62; ++level) {
    mpz_class mn = ln + hn, md = ld + hd;
    Rational m(mn, md);
    if (m == q) return (u64{1} << level) + pos + 2;
    pos <<= 1;
    if (q > m) {
      pos |= 1;
      ln = mn;
      ld = md;
    } else {
      hn = mn;
      hd = md;
    }
  }
  fail(ErrorKind::Guard, "stern-brocot depth of " + q.str() + " exceeds 62");
}

std::vector<Rational> RationalEnumeration::prefix(std::uint64_t count) const {
  std::vector<Rational> out;
  out.reserve(count);
  walk(order_, count, [&](u64, u64 p, u64 q) {
    out.emplace_back(static_cast<long long>(p), static_cast<long long>(q));
    return false;
  });
  return out;
}

std::optional<std::uint64_t> RationalEnumeration::first_index_in(
    std::span<const ClosedInterval> intervals, std::uint64_t horizon) const {
  if (intervals.empty() || horizon == 0) return std::nullopt;
  if (order_ == Order::DenominatorNumerator) return first_by_denominator(intervals, horizon);
  return first_by_scan(intervals, horizon);
}

std::optional<std::uint64_t> RationalEnumeration::first_by_scan(
    std::span<const ClosedInterval> intervals, std::uint64_t horizon) const {
  std::optional<u64> found;
  walk(order_, horizon, [&](u64 idx, u64 p, u64 q) {
    if (in_any(intervals, Rational(static_cast<long long>(p), static_cast<long long>(q)))) {
      found = idx;
      return true;
    }
    return false;
  });
  return found;
}

// Within one denominator the order is by numerator, so the first hit is the
// smallest admissible numerator over all intervals.
std::optional<std::uint64_t> RationalEnumeration::first_by_denominator(
    std::span<const ClosedInterval> intervals, std::uint64_t horizon) const {
  if (in_any(intervals, Rational(0))) return 1;
  if (horizon >= 2 && in_any(intervals, Rational(1))) return 2;
  u64 before = 2;
  for (u64 q = 2; before < horizon; ++q) {
    Rational rq(static_cast<long long>(q));
    std::optional<u64> hit;
    for (const auto& iv : intervals) {
      mpz_class lo = ceil(iv.lo * rq), hi = floor(iv.hi * rq);
      if (lo < 1) lo = 1;
      if (hi > q - 1) hi = q - 1;
      if (lo > hi) continue;
      for (u64 p = lo.get_ui(), e = hi.get_ui(); p <= e; ++p)
        if (std::gcd(p, q) == 1) {
          hit = p;
          break;
        }
      if (hit) break;
    }
    if (hit) {
      u64 rank = 0;
      for (u64 p = 1; p <= *hit; ++p)
        if (std::gcd(p, q) == 1) ++rank;
      u64 idx = before + rank;
      if (idx > horizon) return std::nullopt;
      return idx;
    }
    before += totient(q);
  }
  return std::nullopt;
}

}  // namespace lipgap
