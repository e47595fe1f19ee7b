#pragma once

// Priors, bid-profile indexing, auction tables and the expected
// revenue/welfare functionals every other module consumes.
//
// Value indices are 0-based throughout: bidder i's support is
// v_{i,0} < ... < v_{i,K_i-1}. The abstain corners below index 0 and above
// the top index are never stored; accessors read them as zero.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "optauction/rational.hpp"

namespace optauction {

// A bidder's finite value support with strictly positive probability masses.
class DiscretePrior {
 public:
  // Throws DomainError unless values are strictly increasing and
  // non-negative, masses are positive and sum to exactly one.
  DiscretePrior(std::vector<Rational> values, std::vector<Rational> masses);

  static DiscretePrior uniform(std::vector<Rational> values);

  std::size_t size() const { return values_.size(); }
  const Rational& value(std::size_t k) const { return values_.at(k); }
  const Rational& mass(std::size_t k) const { return masses_.at(k); }
  // F(k) = sum of masses up to and including k.
  const Rational& cumulative(std::size_t k) const { return cumulative_.at(k); }

  std::span<const Rational> values() const { return values_; }
  std::span<const Rational> masses() const { return masses_; }
  std::span<const Rational> cumulatives() const { return cumulative_; }

  bool operator==(const DiscretePrior&) const = default;

 private:
  std::vector<Rational> values_;
  std::vector<Rational> masses_;
  std::vector<Rational> cumulative_;
};

using ProfileIndex = std::size_t;

// Mixed-radix indexing of the profile space K_1 x ... x K_n. The last bidder
// varies fastest.
class ProfileSpace {
 public:
  explicit ProfileSpace(std::vector<std::size_t> support_sizes);

  std::size_t bidders() const { return sizes_.size(); }
  std::size_t size() const { return total_; }
  std::size_t support(std::size_t bidder) const { return sizes_.at(bidder); }
  std::span<const std::size_t> supports() const { return sizes_; }

  std::vector<std::size_t> decode(ProfileIndex profile) const;
  ProfileIndex encode(std::span<const std::size_t> indices) const;

  std::size_t coordinate(ProfileIndex profile, std::size_t bidder) const {
    return (profile / strides_[bidder]) % sizes_[bidder];
  }
  ProfileIndex with_coordinate(ProfileIndex profile, std::size_t bidder,
                               std::size_t k) const {
    return profile - coordinate(profile, bidder) * strides_[bidder] +
           k * strides_[bidder];
  }
  // The profile with `bidder`'s coordinate reset to 0. Two profiles share a
  // column base iff they agree on all opponents' coordinates.
  ProfileIndex column_base(ProfileIndex profile, std::size_t bidder) const {
    return with_coordinate(profile, bidder, 0);
  }
  // One base per opponents' profile, ascending.
  std::vector<ProfileIndex> column_bases(std::size_t bidder) const;

  // "(k_1,...,k_n)" with 0-based indices.
  std::string format(ProfileIndex profile) const;
  // Opponents' profile of `bidder` with its own slot rendered as '*'.
  std::string format_opponents(ProfileIndex profile, std::size_t bidder) const;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 1;
};

// Independent priors for n >= 1 bidders plus the derived profile space.
class Instance {
 public:
  explicit Instance(std::vector<DiscretePrior> bidders);

  std::size_t bidders() const { return priors_.size(); }
  const DiscretePrior& prior(std::size_t bidder) const {
    return priors_.at(bidder);
  }
  std::span<const DiscretePrior> priors() const { return priors_; }
  const ProfileSpace& profiles() const { return space_; }

  // f(k) = prod_i f_i(k_i).
  const Rational& probability(ProfileIndex profile) const {
    return probability_.at(profile);
  }
  // f_{-i}(k_{-i}); the empty product is 1.
  Rational opponents_probability(std::size_t bidder,
                                 ProfileIndex profile) const;
  const Rational& value_at(std::size_t bidder, ProfileIndex profile) const {
    return priors_[bidder].value(space_.coordinate(profile, bidder));
  }

 private:
  std::vector<DiscretePrior> priors_;
  ProfileSpace space_;
  std::vector<Rational> probability_;
};

// Allocation and payment entries per (bidder, profile). Entries start out
// unset; reading an unset entry throws a StructuralError naming the hole.
class AuctionTable {
 public:
  AuctionTable(std::size_t bidders, std::size_t profiles);

  // A complete table with every allocation and payment equal to zero.
  static AuctionTable zeros(const Instance& instance);

  std::size_t bidders() const { return bidders_; }
  std::size_t profiles() const { return profiles_; }

  // Throws DomainError for a negative allocation.
  void set(std::size_t bidder, ProfileIndex profile, Rational allocation,
           Rational payment);
  void set_allocation(std::size_t bidder, ProfileIndex profile,
                      Rational allocation);
  void set_payment(std::size_t bidder, ProfileIndex profile, Rational payment);

  const Rational& allocation(std::size_t bidder, ProfileIndex profile) const;
  const Rational& payment(std::size_t bidder, ProfileIndex profile) const;

  bool complete() const;
  // Throws StructuralError if the table shape does not match the instance
  // or an entry is missing.
  void require_complete(const Instance& instance) const;

  bool operator==(const AuctionTable&) const = default;

 private:
  std::size_t slot(std::size_t bidder, ProfileIndex profile) const;

  std::size_t bidders_;
  std::size_t profiles_;
  std::vector<std::optional<Rational>> allocation_;
  std::vector<std::optional<Rational>> payment_;
};

// Reads bidder's allocation/payment at value index k against the opponents
// of `profile`. k == -1 and k == K_i are the abstain corners and read as 0.
Rational allocation_or_zero(const Instance& instance, const AuctionTable& table,
                            std::size_t bidder, ProfileIndex profile,
                            std::ptrdiff_t k);
Rational payment_or_zero(const Instance& instance, const AuctionTable& table,
                         std::size_t bidder, ProfileIndex profile,
                         std::ptrdiff_t k);

struct InterimTable {
  // [bidder][own value index]
  std::vector<std::vector<Rational>> allocation;
  std::vector<std::vector<Rational>> payment;
};

Rational expected_revenue(const Instance& instance, const AuctionTable& table);
Rational expected_welfare(const Instance& instance, const AuctionTable& table);
InterimTable interim(const Instance& instance, const AuctionTable& table);

}  // namespace optauction
