#include "optauction/single_item.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "optauction/error.hpp"

namespace optauction {

TieBreakRule TieBreakRule::lexicographic() {
  return TieBreakRule(Kind::kLexicographic, {});
}

TieBreakRule TieBreakRule::fixed_permutation(std::vector<std::size_t> order) {
  std::vector<std::size_t> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] != i) {
      throw StructuralError("tie-break order is not a permutation of 0.." +
                            std::to_string(order.size() - 1));
    }
  }
  return TieBreakRule(Kind::kFixedPermutation, std::move(order));
}

std::size_t TieBreakRule::rank(std::size_t bidder, std::size_t n) const {
  if (bidder >= n) {
    throw StructuralError("bidder " + std::to_string(bidder) +
                          " outside tie-break range");
  }
  if (kind_ == Kind::kLexicographic) return bidder;
  if (order_.size() != n) {
    throw StructuralError("tie-break permutation covers " +
                          std::to_string(order_.size()) + " bidders, not " +
                          std::to_string(n));
  }
  return static_cast<std::size_t>(
      std::find(order_.begin(), order_.end(), bidder) - order_.begin());
}

std::vector<std::size_t> TieBreakRule::order(std::size_t n) const {
  if (kind_ == Kind::kLexicographic) {
    std::vector<std::size_t> ids(n);
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    return ids;
  }
  if (order_.size() != n) {
    throw StructuralError("tie-break permutation covers " +
                          std::to_string(order_.size()) + " bidders, not " +
                          std::to_string(n));
  }
  return order_;
}

std::vector<Rational> allocate_profile(std::span<const Rational> ironed,
                                       const TieBreakRule& tie_break) {
  if (ironed.empty()) throw StructuralError("allocate_profile: no bidders");
  const std::size_t n = ironed.size();
  std::vector<Rational> allocation(n, Rational(0));
  std::optional<std::size_t> winner;
  for (std::size_t i : tie_break.order(n)) {
    if (sgn(ironed[i]) < 0) continue;
    if (!winner || ironed[i] > ironed[*winner]) winner = i;
  }
  if (winner) allocation[*winner] = 1;
  return allocation;
}

Rational payment_formula(const DiscretePrior& prior,
                         std::span<const Rational> column, std::size_t k) {
  if (k >= prior.size() || k >= column.size()) {
    throw StructuralError("payment_formula: index " + std::to_string(k) +
                          " out of range");
  }
  Rational payment = prior.value(k) * column[k];
  for (std::size_t l = 0; l < k; ++l) {
    payment -= (prior.value(l + 1) - prior.value(l)) * column[l];
  }
  return payment;
}

std::vector<Rational> ironed_at(const Instance& instance,
                                std::span<const IroningResult> schedules,
                                ProfileIndex profile) {
  if (schedules.size() != instance.bidders()) {
    throw StructuralError("expected one schedule per bidder");
  }
  std::vector<Rational> values(instance.bidders());
  for (std::size_t i = 0; i < instance.bidders(); ++i) {
    values[i] = schedules[i].schedule.ironed.at(
        instance.profiles().coordinate(profile, i));
  }
  return values;
}

std::optional<Rational> critical_bid(const Instance& instance,
                                     std::size_t bidder, ProfileIndex profile,
                                     std::span<const IroningResult> schedules,
                                     const TieBreakRule& tie_break) {
  const auto& space = instance.profiles();
  for (std::size_t k = 0; k < instance.prior(bidder).size(); ++k) {
    const ProfileIndex at = space.with_coordinate(profile, bidder, k);
    const auto allocation =
        allocate_profile(ironed_at(instance, schedules, at), tie_break);
    if (allocation[bidder] == 1) return instance.prior(bidder).value(k);
  }
  return std::nullopt;
}

void apply_payment_rule(const Instance& instance, AuctionTable& table) {
  const auto& space = instance.profiles();
  for (std::size_t i = 0; i < instance.bidders(); ++i) {
    const auto& prior = instance.prior(i);
    std::vector<Rational> column(prior.size());
    for (ProfileIndex base : space.column_bases(i)) {
      for (std::size_t k = 0; k < prior.size(); ++k) {
        column[k] = table.allocation(i, space.with_coordinate(base, i, k));
      }
      // Running form of the payment formula.
      Rational lower_sum = 0;
      for (std::size_t k = 0; k < prior.size(); ++k) {
        table.set_payment(i, space.with_coordinate(base, i, k),
                          prior.value(k) * column[k] - lower_sum);
        if (k + 1 < prior.size()) {
          lower_sum += (prior.value(k + 1) - prior.value(k)) * column[k];
        }
      }
    }
  }
}

AuctionTable build_optimal_auction(const Instance& instance,
                                   const Rational& alpha,
                                   const TieBreakRule& tie_break) {
  const auto schedules = ironed_schedules(instance, alpha);
  AuctionTable table(instance.bidders(), instance.profiles().size());
  for (ProfileIndex p = 0; p < instance.profiles().size(); ++p) {
    const auto allocation =
        allocate_profile(ironed_at(instance, schedules, p), tie_break);
    for (std::size_t i = 0; i < instance.bidders(); ++i) {
      table.set_allocation(i, p, allocation[i]);
    }
  }
  apply_payment_rule(instance, table);
  return table;
}

}  // namespace optauction
