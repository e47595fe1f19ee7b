#include "optauction/truthfulness.hpp"

#include <functional>

namespace optauction {

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kDsicFull: return "dsic-full";
    case ViolationKind::kDsicLocalDown: return "dsic-local-down";
    case ViolationKind::kDsicLocalUp: return "dsic-local-up";
    case ViolationKind::kBicFull: return "bic-full";
    case ViolationKind::kBicLocal: return "bic-local";
    case ViolationKind::kIr: return "ir";
    case ViolationKind::kMonotonicity: return "monotonicity";
    case ViolationKind::kInterimMonotonicity: return "interim-monotonicity";
  }
  return "unknown";
}

namespace {

// allocation(k), payment(k) of one bidder along one column; the column is
// either an ex-post column (fixed opponents) or the interim rule.
struct ColumnView {
  std::function<const Rational&(std::size_t)> allocation;
  std::function<const Rational&(std::size_t)> payment;
};

// Utility of bidding index `bid` (empty = abstain) with true value `value`.
Rational utility(const ColumnView& column, const Rational& value,
                 std::optional<std::size_t> bid) {
  if (!bid) return 0;
  return column.allocation(*bid) * value - column.payment(*bid);
}

struct TruthfulnessKinds {
  ViolationKind full;
  ViolationKind down;
  ViolationKind up;
};

void check_column(const DiscretePrior& prior, const ColumnView& column,
                  CheckMode mode, TruthfulnessKinds kinds, std::size_t bidder,
                  std::optional<ProfileIndex> opponents,
                  std::vector<ViolationReport>& out) {
  const std::size_t K = prior.size();
  auto test = [&](std::size_t k, std::optional<std::size_t> bid,
                  ViolationKind kind) {
    const Rational& v = prior.value(k);
    Rational slack = utility(column, v, k) - utility(column, v, bid);
    if (sgn(slack) < 0) {
      out.push_back({bid ? kind : ViolationKind::kIr, bidder, k, bid,
                     opponents, std::move(slack)});
    }
  };
  for (std::size_t k = 0; k < K; ++k) {
    if (mode == CheckMode::kFull) {
      for (std::size_t b = 0; b < K; ++b) {
        if (b != k) test(k, b, kinds.full);
      }
      test(k, std::nullopt, kinds.full);
    } else {
      if (k == 0) {
        test(k, std::nullopt, kinds.down);
      } else {
        test(k, k - 1, kinds.down);
      }
      if (k + 1 < K) test(k, k + 1, kinds.up);
    }
  }
}

}  // namespace

std::vector<ViolationReport> check_dsic(const Instance& instance,
                                        const AuctionTable& table,
                                        CheckMode mode) {
  table.require_complete(instance);
  const auto& space = instance.profiles();
  const TruthfulnessKinds kinds{ViolationKind::kDsicFull,
                                ViolationKind::kDsicLocalDown,
                                ViolationKind::kDsicLocalUp};
  std::vector<ViolationReport> out;
  for (std::size_t i = 0; i < instance.bidders(); ++i) {
    for (ProfileIndex base : space.column_bases(i)) {
      ColumnView column{
          [&, i, base](std::size_t k) -> const Rational& {
            return table.allocation(i, space.with_coordinate(base, i, k));
          },
          [&, i, base](std::size_t k) -> const Rational& {
            return table.payment(i, space.with_coordinate(base, i, k));
          }};
      check_column(instance.prior(i), column, mode, kinds, i, base, out);
    }
  }
  return out;
}

std::vector<ViolationReport> check_bic(const Instance& instance,
                                       const AuctionTable& table,
                                       CheckMode mode) {
  const InterimTable rules = interim(instance, table);
  const TruthfulnessKinds kinds{ViolationKind::kBicFull,
                                ViolationKind::kBicLocal,
                                ViolationKind::kBicLocal};
  std::vector<ViolationReport> out;
  for (std::size_t i = 0; i < instance.bidders(); ++i) {
    ColumnView column{
        [&, i](std::size_t k) -> const Rational& {
          return rules.allocation[i][k];
        },
        [&, i](std::size_t k) -> const Rational& {
          return rules.payment[i][k];
        }};
    check_column(instance.prior(i), column, mode, kinds, i, std::nullopt, out);
  }
  return out;
}

std::vector<ViolationReport> check_monotonicity(const Instance& instance,
                                                const AuctionTable& table,
                                                MonotonicityScope scope) {
  std::vector<ViolationReport> out;
  if (scope == MonotonicityScope::kInterim) {
    const InterimTable rules = interim(instance, table);
    for (std::size_t i = 0; i < instance.bidders(); ++i) {
      for (std::size_t k = 1; k < instance.prior(i).size(); ++k) {
        Rational slack = rules.allocation[i][k] - rules.allocation[i][k - 1];
        if (sgn(slack) < 0) {
          out.push_back({ViolationKind::kInterimMonotonicity, i, k, k - 1,
                         std::nullopt, std::move(slack)});
        }
      }
    }
    return out;
  }
  table.require_complete(instance);
  const auto& space = instance.profiles();
  for (std::size_t i = 0; i < instance.bidders(); ++i) {
    for (ProfileIndex base : space.column_bases(i)) {
      for (std::size_t k = 1; k < instance.prior(i).size(); ++k) {
        Rational slack =
            table.allocation(i, space.with_coordinate(base, i, k)) -
            table.allocation(i, space.with_coordinate(base, i, k - 1));
        if (sgn(slack) < 0) {
          out.push_back({ViolationKind::kMonotonicity, i, k, k - 1, base,
                         std::move(slack)});
        }
      }
    }
  }
  return out;
}

std::string describe(const Instance& instance, const ViolationReport& report) {
  std::string text(to_string(report.kind));
  text += ": bidder " + std::to_string(report.bidder) + " true " +
          std::to_string(report.true_index) + " -> " +
          (report.deviation ? std::to_string(*report.deviation)
                            : std::string("abstain"));
  text += " vs ";
  text += report.opponents
              ? instance.profiles().format_opponents(*report.opponents,
                                                     report.bidder)
              : std::string("interim");
  text += " slack " + to_string(report.slack);
  return text;
}

}  // namespace optauction
