#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lipgap/rational.hpp"

namespace lipgap {

struct ClosedInterval {
  Rational lo, hi;  // lo <= hi
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
};

// A fixed listing q_1, q_2, ... of every reduced fraction in [0,1], 1-based.
//
// denominator-numerator: 0, 1, 1/2, 1/3, 2/3, 1/4, 3/4, 1/5, ...
// stern-brocot:          0, 1, then the Stern-Brocot tree of (0,1) level by level, left to right
class RationalEnumeration {
 public:
  enum class Order { DenominatorNumerator, SternBrocot };

  explicit RationalEnumeration(Order order = Order::DenominatorNumerator) : order_(order) {}
  static RationalEnumeration from_name(std::string_view name);

  Order order() const { return order_; }
  std::string name() const;

  Rational at(std::uint64_t index) const;
  std::uint64_t index_of(const Rational& q) const;
  std::vector<Rational> prefix(std::uint64_t count) const;

  // Least index n <= horizon with q_n inside one of the intervals (sorted, disjoint).
  std::optional<std::uint64_t> first_index_in(std::span<const ClosedInterval> intervals,
                                              std::uint64_t horizon) const;

 private:
  std::optional<std::uint64_t> first_by_denominator(std::span<const ClosedInterval> intervals,
                                                    std::uint64_t horizon) const;
  std::optional<std::uint64_t> first_by_scan(std::span<const ClosedInterval> intervals,
                                             std::uint64_t horizon) const;
  Order order_;
};

bool in_any(std::span<const ClosedInterval> sorted, const Rational& x);

}  // namespace lipgap
