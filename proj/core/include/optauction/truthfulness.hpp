#pragma once

// DSIC / BIC / IR / monotonicity checkers in full and local forms.
//
// IR is checked as the deviation to an "abstain" bid with zero allocation
// and zero payment; such violations carry kind kIr. Every violated
// constraint is reported with its exact (negative) slack.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "optauction/core_model.hpp"
#include "optauction/rational.hpp"

namespace optauction {

enum class ViolationKind {
  kDsicFull,
  kDsicLocalDown,
  kDsicLocalUp,
  kBicFull,
  kBicLocal,
  kIr,
  kMonotonicity,
  kInterimMonotonicity,
};

std::string_view to_string(ViolationKind kind);

struct ViolationReport {
  ViolationKind kind;
  std::size_t bidder = 0;
  std::size_t true_index = 0;
  // Deviating value index; empty for the abstain bid.
  std::optional<std::size_t> deviation;
  // Column base of the opponents' profile; empty for interim checks.
  std::optional<ProfileIndex> opponents;
  // u(truth) - u(deviation), or a(k) - a(k-1) for monotonicity. Negative.
  Rational slack;

  bool operator==(const ViolationReport&) const = default;
};

enum class CheckMode { kFull, kLocal };
enum class MonotonicityScope { kExPost, kInterim };

std::vector<ViolationReport> check_dsic(const Instance& instance,
                                        const AuctionTable& table,
                                        CheckMode mode);
std::vector<ViolationReport> check_bic(const Instance& instance,
                                       const AuctionTable& table,
                                       CheckMode mode);
std::vector<ViolationReport> check_monotonicity(const Instance& instance,
                                                const AuctionTable& table,
                                                MonotonicityScope scope);

// One-line human description, e.g.
// "dsic-full: bidder 0 true 2 -> 1 vs (*,0) slack -1".
std::string describe(const Instance& instance, const ViolationReport& report);

}  // namespace optauction
