#include "optauction/core_model.hpp"

#include <sstream>
#include <utility>

#include "optauction/error.hpp"

namespace optauction {

DiscretePrior::DiscretePrior(std::vector<Rational> values,
                             std::vector<Rational> masses)
    : values_(std::move(values)), masses_(std::move(masses)) {
  if (values_.empty()) throw DomainError("prior support is empty");
  // mpq_class(p, q) does not reduce; comparisons need canonical form.
  for (auto& v : values_) v.canonicalize();
  for (auto& m : masses_) m.canonicalize();
  if (values_.size() != masses_.size()) {
    throw DomainError("prior has " + std::to_string(values_.size()) +
                      " values but " + std::to_string(masses_.size()) +
                      " masses");
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (sgn(values_[k]) < 0) {
      throw DomainError("prior value " + std::to_string(k) + " is negative");
    }
    if (k > 0 && values_[k] <= values_[k - 1]) {
      throw DomainError("prior values are not strictly increasing at index " +
                        std::to_string(k));
    }
    if (sgn(masses_[k]) <= 0) {
      throw DomainError("prior mass " + std::to_string(k) +
                        " is not positive");
    }
  }
  cumulative_.reserve(masses_.size());
  Rational running = 0;
  for (const auto& m : masses_) {
    running += m;
    cumulative_.push_back(running);
  }
  if (running != 1) {
    throw DomainError("prior masses sum to " + to_string(running) +
                      ", not 1");
  }
}

DiscretePrior DiscretePrior::uniform(std::vector<Rational> values) {
  const Rational mass(1, static_cast<unsigned long>(values.size()));
  std::vector<Rational> masses(values.size(), mass);
  return DiscretePrior(std::move(values), std::move(masses));
}

ProfileSpace::ProfileSpace(std::vector<std::size_t> support_sizes)
    : sizes_(std::move(support_sizes)), strides_(sizes_.size(), 1) {
  for (std::size_t i = sizes_.size(); i-- > 0;) {
    if (sizes_[i] == 0) throw DomainError("empty support in profile space");
    strides_[i] = total_;
    total_ *= sizes_[i];
  }
}

std::vector<std::size_t> ProfileSpace::decode(ProfileIndex profile) const {
  if (profile >= total_) {
    throw StructuralError("profile index " + std::to_string(profile) +
                          " out of range");
  }
  std::vector<std::size_t> indices(sizes_.size());
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    indices[i] = coordinate(profile, i);
  }
  return indices;
}

ProfileIndex ProfileSpace::encode(std::span<const std::size_t> indices) const {
  if (indices.size() != sizes_.size()) {
    throw StructuralError("profile has " + std::to_string(indices.size()) +
                          " coordinates, expected " +
                          std::to_string(sizes_.size()));
  }
  ProfileIndex profile = 0;
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (indices[i] >= sizes_[i]) {
      throw StructuralError("value index " + std::to_string(indices[i]) +
                            " out of range for bidder " + std::to_string(i));
    }
    profile += indices[i] * strides_[i];
  }
  return profile;
}

std::vector<ProfileIndex> ProfileSpace::column_bases(std::size_t bidder) const {
  std::vector<ProfileIndex> bases;
  bases.reserve(total_ / sizes_.at(bidder));
  for (ProfileIndex p = 0; p < total_; ++p) {
    if (coordinate(p, bidder) == 0) bases.push_back(p);
  }
  return bases;
}

std::string ProfileSpace::format(ProfileIndex profile) const {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (i) out << ',';
    out << coordinate(profile, i);
  }
  out << ')';
  return out.str();
}

std::string ProfileSpace::format_opponents(ProfileIndex profile,
                                           std::size_t bidder) const {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (i) out << ',';
    if (i == bidder) {
      out << '*';
    } else {
      out << coordinate(profile, i);
    }
  }
  out << ')';
  return out.str();
}

namespace {

std::vector<std::size_t> support_sizes(std::span<const DiscretePrior> priors) {
  std::vector<std::size_t> sizes;
  sizes.reserve(priors.size());
  for (const auto& p : priors) sizes.push_back(p.size());
  return sizes;
}

}  // namespace

Instance::Instance(std::vector<DiscretePrior> bidders)
    : priors_(std::move(bidders)),
      space_(priors_.empty() ? throw DomainError("instance has no bidders")
                             : support_sizes(priors_)) {
  probability_.resize(space_.size());
  for (ProfileIndex p = 0; p < space_.size(); ++p) {
    Rational f = 1;
    for (std::size_t i = 0; i < priors_.size(); ++i) {
      f *= priors_[i].mass(space_.coordinate(p, i));
    }
    probability_[p] = f;
  }
}

Rational Instance::opponents_probability(std::size_t bidder,
                                         ProfileIndex profile) const {
  Rational f = 1;
  for (std::size_t j = 0; j < priors_.size(); ++j) {
    if (j != bidder) f *= priors_[j].mass(space_.coordinate(profile, j));
  }
  return f;
}

AuctionTable::AuctionTable(std::size_t bidders, std::size_t profiles)
    : bidders_(bidders),
      profiles_(profiles),
      allocation_(bidders * profiles),
      payment_(bidders * profiles) {}

AuctionTable AuctionTable::zeros(const Instance& instance) {
  AuctionTable table(instance.bidders(), instance.profiles().size());
  for (std::size_t i = 0; i < table.bidders_; ++i) {
    for (ProfileIndex p = 0; p < table.profiles_; ++p) table.set(i, p, 0, 0);
  }
  return table;
}

std::size_t AuctionTable::slot(std::size_t bidder, ProfileIndex profile) const {
  if (bidder >= bidders_ || profile >= profiles_) {
    throw StructuralError("table entry (bidder " + std::to_string(bidder) +
                          ", profile " + std::to_string(profile) +
                          ") outside a " + std::to_string(bidders_) + "x" +
                          std::to_string(profiles_) + " table");
  }
  return bidder * profiles_ + profile;
}

void AuctionTable::set(std::size_t bidder, ProfileIndex profile,
                       Rational allocation, Rational payment) {
  set_allocation(bidder, profile, std::move(allocation));
  set_payment(bidder, profile, std::move(payment));
}

void AuctionTable::set_allocation(std::size_t bidder, ProfileIndex profile,
                                  Rational allocation) {
  if (sgn(allocation) < 0) {
    throw DomainError("negative allocation for bidder " +
                      std::to_string(bidder) + " at profile " +
                      std::to_string(profile));
  }
  allocation_[slot(bidder, profile)] = std::move(allocation);
}

void AuctionTable::set_payment(std::size_t bidder, ProfileIndex profile,
                               Rational payment) {
  payment_[slot(bidder, profile)] = std::move(payment);
}

const Rational& AuctionTable::allocation(std::size_t bidder,
                                         ProfileIndex profile) const {
  const auto& entry = allocation_[slot(bidder, profile)];
  if (!entry) {
    throw StructuralError("missing allocation for bidder " +
                          std::to_string(bidder) + " at profile " +
                          std::to_string(profile));
  }
  return *entry;
}

const Rational& AuctionTable::payment(std::size_t bidder,
                                      ProfileIndex profile) const {
  const auto& entry = payment_[slot(bidder, profile)];
  if (!entry) {
    throw StructuralError("missing payment for bidder " +
                          std::to_string(bidder) + " at profile " +
                          std::to_string(profile));
  }
  return *entry;
}

bool AuctionTable::complete() const {
  for (std::size_t s = 0; s < allocation_.size(); ++s) {
    if (!allocation_[s] || !payment_[s]) return false;
  }
  return true;
}

void AuctionTable::require_complete(const Instance& instance) const {
  if (bidders_ != instance.bidders() ||
      profiles_ != instance.profiles().size()) {
    throw StructuralError(
        "table is " + std::to_string(bidders_) + "x" +
        std::to_string(profiles_) + " but the instance has " +
        std::to_string(instance.bidders()) + " bidders and " +
        std::to_string(instance.profiles().size()) + " profiles");
  }
  for (std::size_t i = 0; i < bidders_; ++i) {
    for (ProfileIndex p = 0; p < profiles_; ++p) {
      const std::size_t s = i * profiles_ + p;
      if (!allocation_[s] || !payment_[s]) {
        throw StructuralError(
            std::string("missing ") + (!allocation_[s] ? "allocation" : "payment") +
            " for bidder " + std::to_string(i) + " at profile " +
            instance.profiles().format(p));
      }
    }
  }
}

Rational allocation_or_zero(const Instance& instance, const AuctionTable& table,
                            std::size_t bidder, ProfileIndex profile,
                            std::ptrdiff_t k) {
  const auto K = static_cast<std::ptrdiff_t>(instance.prior(bidder).size());
  if (k < 0 || k >= K) return 0;
  return table.allocation(
      bidder, instance.profiles().with_coordinate(profile, bidder,
                                                  static_cast<std::size_t>(k)));
}

Rational payment_or_zero(const Instance& instance, const AuctionTable& table,
                         std::size_t bidder, ProfileIndex profile,
                         std::ptrdiff_t k) {
  const auto K = static_cast<std::ptrdiff_t>(instance.prior(bidder).size());
  if (k < 0 || k >= K) return 0;
  return table.payment(
      bidder, instance.profiles().with_coordinate(profile, bidder,
                                                  static_cast<std::size_t>(k)));
}

Rational expected_revenue(const Instance& instance, const AuctionTable& table) {
  table.require_complete(instance);
  Rational total = 0;
  for (ProfileIndex p = 0; p < instance.profiles().size(); ++p) {
    Rational paid = 0;
    for (std::size_t i = 0; i < instance.bidders(); ++i) {
      paid += table.payment(i, p);
    }
    total += instance.probability(p) * paid;
  }
  return total;
}

Rational expected_welfare(const Instance& instance, const AuctionTable& table) {
  table.require_complete(instance);
  Rational total = 0;
  for (ProfileIndex p = 0; p < instance.profiles().size(); ++p) {
    Rational welfare = 0;
    for (std::size_t i = 0; i < instance.bidders(); ++i) {
      welfare += table.allocation(i, p) * instance.value_at(i, p);
    }
    total += instance.probability(p) * welfare;
  }
  return total;
}

InterimTable interim(const Instance& instance, const AuctionTable& table) {
  table.require_complete(instance);
  const auto& space = instance.profiles();
  InterimTable result;
  result.allocation.resize(instance.bidders());
  result.payment.resize(instance.bidders());
  for (std::size_t i = 0; i < instance.bidders(); ++i) {
    const std::size_t K = instance.prior(i).size();
    result.allocation[i].assign(K, Rational(0));
    result.payment[i].assign(K, Rational(0));
    for (ProfileIndex p = 0; p < space.size(); ++p) {
      const std::size_t k = space.coordinate(p, i);
      const Rational weight = instance.opponents_probability(i, p);
      result.allocation[i][k] += weight * table.allocation(i, p);
      result.payment[i][k] += weight * table.payment(i, p);
    }
  }
  return result;
}

}  // namespace optauction
