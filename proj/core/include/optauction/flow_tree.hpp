#pragma once

// Bidders buying fixed-route flows on a capacitated network with unique
// directed routes. Each bidder i ships demand d_i from s_i to t_i; at every
// profile the allocations satisfy sum_{i uses e} (d_i / c_e) a_i <= 1 and
// 0 <= a_i <= 1.
//
// The combinatorial algorithm treats f(v) * ironed phi^alpha as budgets,
// prices competitive edges by buy-ins and fills the leftover capacity. Its
// certificate (eta per edge, psi and kappa per bidder) closes
//
//   psi_i + sum_{e on path(i)} (d_i / c_e) eta_e - kappa_i = f(v) ironed_i.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "optauction/core_model.hpp"
#include "optauction/rational.hpp"
#include "optauction/single_item.hpp"
#include "optauction/virtuals.hpp"

namespace optauction {

struct FlowEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  Rational capacity;
};

struct FlowBidder {
  std::size_t source = 0;
  std::size_t sink = 0;
  Rational demand;
  DiscretePrior prior;
};

class FlowInstance {
 public:
  // StructuralError for out-of-range nodes, a directed cycle, or a bidder
  // without exactly one directed route (source == sink included);
  // DomainError for non-positive capacities or demands and alpha outside
  // [0, 1].
  FlowInstance(std::size_t nodes, std::vector<FlowEdge> edges,
               std::vector<FlowBidder> bidders, Rational alpha);

  std::size_t nodes() const { return nodes_; }
  const std::vector<FlowEdge>& edges() const { return edges_; }
  const std::vector<FlowBidder>& bidders() const { return bidders_; }
  const Rational& alpha() const { return alpha_; }
  // The single-parameter market over the bidders' priors.
  const Instance& market() const { return market_; }

  // Edge ids of bidder i's route from source to sink.
  const std::vector<std::size_t>& path(std::size_t bidder) const;
  bool uses(std::size_t bidder, std::size_t edge) const;
  // d_i / c_e if bidder i uses edge e, else 0.
  Rational load(std::size_t bidder, std::size_t edge) const;

 private:
  std::size_t nodes_;
  std::vector<FlowEdge> edges_;
  std::vector<FlowBidder> bidders_;
  Rational alpha_;
  Instance market_;
  std::vector<std::vector<std::size_t>> paths_;
  std::vector<std::vector<bool>> uses_;  // [bidder][edge]
};

// The unique route; same as instance.path(bidder).
std::vector<std::size_t> unique_path(const FlowInstance& instance,
                                     std::size_t bidder);

// sum over active bidders using `edge` of d_i / c_e; the edge is
// competitive when this exceeds 1.
Rational competition(const FlowInstance& instance, std::size_t edge,
                     const std::vector<bool>& active);

struct FlowKktCertificate {
  std::vector<Rational> eta;    // per edge
  std::vector<Rational> psi;    // per bidder, dual of a_i <= 1
  std::vector<Rational> kappa;  // per bidder, dual of a_i >= 0
};

struct BuyInEvent {
  std::size_t edge = 0;
  Rational competition;
  Rational amount;
  // (bidder, charge) for every active bidder on the edge.
  std::vector<std::pair<std::size_t, Rational>> charges;
  // Bidders whose budget reached zero, in tie-break order.
  std::vector<std::size_t> eliminated;
};

struct FillEvent {
  std::size_t bidder = 0;
  // The route edge with the least leftover capacity relative to demand;
  // empty for bidders that kept budget and are allocated in full.
  std::optional<std::size_t> edge;
  Rational fraction;
};

struct AlgorithmTrace {
  std::vector<Rational> initial_budgets;
  std::vector<std::size_t> excluded;  // negative budget
  std::vector<BuyInEvent> buy_ins;
  // Final order of eliminated bidders (most recently eliminated first).
  std::vector<std::size_t> elimination_order;
  // Edge on which each eliminated bidder spent its last budget.
  std::vector<std::optional<std::size_t>> last_edge;
  std::vector<Rational> final_budgets;
  std::vector<FillEvent> fills;
};

// Human-readable dump of a trace, one event per line.
std::string describe(const AlgorithmTrace& trace);

struct CombinatorialResult {
  std::vector<Rational> allocation;
  FlowKktCertificate certificate;
  AlgorithmTrace trace;
};

// One run of the algorithm at `profile`. Bidders still active once no edge
// is competitive are allocated in full (including those whose budget ended
// at exactly zero); eliminated bidders then fill, in elimination order,
// a_i = min(1, min_{e on path(i)} leftover_e / d_i). InvariantError, with
// the trace attached to the message, on a negative budget or an overfull
// edge.
CombinatorialResult run_combinatorial(
    const FlowInstance& instance, ProfileIndex profile,
    std::span<const IroningResult> schedules,
    const TieBreakRule& tie_break = TieBreakRule::lexicographic());

struct FlowAuction {
  AuctionTable table;
  std::vector<FlowKktCertificate> certificates;  // per profile
  std::vector<AlgorithmTrace> traces;            // per profile
};

// run_combinatorial at every profile, then payments column-wise.
FlowAuction build_flow_auction(
    const FlowInstance& instance,
    const TieBreakRule& tie_break = TieBreakRule::lexicographic());

enum class FlowKktLine {
  kAllocationBounds,         // 0 <= a_i <= 1
  kCapacity,                 // sum d_i a_i <= c_e
  kDualFeasibility,          // eta, psi, kappa >= 0
  kDualEquation,             // psi + sum (d/c) eta - kappa = f phi
  kFullAllocationSlackness,  // psi_i > 0 => a_i = 1
  kNonnegativitySlackness,   // kappa_i > 0 => a_i = 0
  kCapacitySlackness,        // eta_e > 0 => edge saturated
};
std::string_view to_string(FlowKktLine line);

struct FlowKktViolation {
  FlowKktLine line;
  std::optional<std::size_t> edge;
  std::optional<std::size_t> bidder;
  std::string detail;
};

struct FlowKktReport {
  std::vector<FlowKktViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Exact check of the flow KKT system at one profile. StructuralError when
// the allocation or certificate sizes do not match the instance.
FlowKktReport verify_flow_kkt(const FlowInstance& instance,
                              ProfileIndex profile,
                              std::span<const Rational> allocation,
                              const FlowKktCertificate& certificate);
FlowKktReport verify_flow_kkt(const FlowInstance& instance,
                              ProfileIndex profile,
                              std::span<const Rational> allocation,
                              const FlowKktCertificate& certificate,
                              std::span<const IroningResult> schedules);

}  // namespace optauction
