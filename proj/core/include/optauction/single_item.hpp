#pragma once

// The optimal single-item auction: the item goes to a bidder with the
// highest non-negative ironed (generalized) virtual value, and winners pay
// their critical bid. Payments for arbitrary monotone columns follow
//
//   p_i(k) = v_k a_i(k) - sum_{l<k} (v_{l+1} - v_l) a_i(l).

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "optauction/core_model.hpp"
#include "optauction/rational.hpp"
#include "optauction/virtuals.hpp"

namespace optauction {

class TieBreakRule {
 public:
  enum class Kind { kLexicographic, kFixedPermutation };

  // Lowest bidder index wins ties.
  static TieBreakRule lexicographic();
  // `order` lists bidders from most to least preferred; it must be a
  // permutation of 0..n-1 (checked against n when the rule is applied).
  static TieBreakRule fixed_permutation(std::vector<std::size_t> order);

  Kind kind() const { return kind_; }
  std::span<const std::size_t> permutation() const { return order_; }

  // Position of `bidder` in the preference order; lower is preferred.
  // Throws StructuralError if the rule does not cover n bidders.
  std::size_t rank(std::size_t bidder, std::size_t n) const;
  // Bidders 0..n-1 from most to least preferred.
  std::vector<std::size_t> order(std::size_t n) const;

  bool operator==(const TieBreakRule&) const = default;

 private:
  TieBreakRule(Kind kind, std::vector<std::size_t> order)
      : kind_(kind), order_(std::move(order)) {}

  Kind kind_;
  std::vector<std::size_t> order_;
};

// 0-1 allocation for one profile given each bidder's ironed value there.
// Ironed value exactly zero still wins. StructuralError on an empty list.
std::vector<Rational> allocate_profile(std::span<const Rational> ironed,
                                       const TieBreakRule& tie_break);

// Payment at value index k for a column of allocations (indices 0..k must be
// present). StructuralError when k is out of range.
Rational payment_formula(const DiscretePrior& prior,
                         std::span<const Rational> column, std::size_t k);

// Smallest value at which `bidder` wins against the opponents of `profile`
// (its own coordinate is ignored); empty if it never wins.
std::optional<Rational> critical_bid(const Instance& instance,
                                     std::size_t bidder, ProfileIndex profile,
                                     std::span<const IroningResult> schedules,
                                     const TieBreakRule& tie_break);

// Overwrites every payment in a table with complete allocations by the
// column-wise payment formula.
void apply_payment_rule(const Instance& instance, AuctionTable& table);

// Ironed values of every bidder at `profile`.
std::vector<Rational> ironed_at(const Instance& instance,
                                std::span<const IroningResult> schedules,
                                ProfileIndex profile);

AuctionTable build_optimal_auction(
    const Instance& instance, const Rational& alpha,
    const TieBreakRule& tie_break = TieBreakRule::lexicographic());

}  // namespace optauction
