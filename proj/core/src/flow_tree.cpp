#include "optauction/flow_tree.hpp"

#include <algorithm>
#include <sstream>

#include "optauction/error.hpp"

namespace optauction {

namespace {

std::vector<DiscretePrior> priors_of(const std::vector<FlowBidder>& bidders) {
  std::vector<DiscretePrior> priors;
  for (const auto& b : bidders) priors.push_back(b.prior);
  return priors;
}

std::vector<std::size_t> topological_order(
    std::size_t nodes, const std::vector<FlowEdge>& edges,
    const std::vector<std::vector<std::size_t>>& outgoing) {
  std::vector<std::size_t> indegree(nodes, 0);
  for (const auto& e : edges) ++indegree[e.to];
  std::vector<std::size_t> order;
  for (std::size_t v = 0; v < nodes; ++v) {
    if (indegree[v] == 0) order.push_back(v);
  }
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (std::size_t e : outgoing[order[head]]) {
      if (--indegree[edges[e].to] == 0) order.push_back(edges[e].to);
    }
  }
  if (order.size() != nodes) {
    throw StructuralError("flow network contains a directed cycle");
  }
  return order;
}

}  // namespace

FlowInstance::FlowInstance(std::size_t nodes, std::vector<FlowEdge> edges,
                           std::vector<FlowBidder> bidders, Rational alpha)
    : nodes_(nodes),
      edges_(std::move(edges)),
      bidders_(std::move(bidders)),
      alpha_(std::move(alpha)),
      market_(priors_of(bidders_)) {
  validate_alpha(alpha_);
  std::vector<std::vector<std::size_t>> outgoing(nodes_);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    FlowEdge& edge = edges_[e];
    edge.capacity.canonicalize();
    if (edge.from >= nodes_ || edge.to >= nodes_) {
      throw StructuralError("edge " + std::to_string(e) +
                            " has an endpoint outside 0.." +
                            std::to_string(nodes_ - 1));
    }
    if (sgn(edge.capacity) <= 0) {
      throw DomainError("edge " + std::to_string(e) +
                        " has non-positive capacity " + to_string(edge.capacity));
    }
    outgoing[edge.from].push_back(e);
  }
  const auto order = topological_order(nodes_, edges_, outgoing);

  for (std::size_t i = 0; i < bidders_.size(); ++i) {
    FlowBidder& b = bidders_[i];
    b.demand.canonicalize();
    const std::string who = "bidder " + std::to_string(i);
    if (b.source >= nodes_ || b.sink >= nodes_) {
      throw StructuralError(who + " has an endpoint outside the network");
    }
    if (sgn(b.demand) <= 0) {
      throw DomainError(who + " has non-positive demand " + to_string(b.demand));
    }
    if (b.source == b.sink) {
      throw StructuralError(who + " has source equal to sink");
    }
    // Route counts from the source, capped at 2, with the entering edge of
    // the first route found.
    std::vector<int> routes(nodes_, 0);
    std::vector<std::size_t> via(nodes_, edges_.size());
    routes[b.source] = 1;
    for (std::size_t v : order) {
      if (routes[v] == 0) continue;
      for (std::size_t e : outgoing[v]) {
        const std::size_t w = edges_[e].to;
        if (routes[w] == 0) via[w] = e;
        routes[w] = std::min(2, routes[w] + routes[v]);
      }
    }
    if (routes[b.sink] == 0) {
      throw StructuralError(who + " has no route from node " +
                            std::to_string(b.source) + " to node " +
                            std::to_string(b.sink));
    }
    if (routes[b.sink] > 1) {
      throw StructuralError(who + " has more than one route from node " +
                            std::to_string(b.source) + " to node " +
                            std::to_string(b.sink));
    }
    std::vector<std::size_t> path;
    for (std::size_t v = b.sink; v != b.source; v = edges_[via[v]].from) {
      path.push_back(via[v]);
    }
    std::reverse(path.begin(), path.end());
    std::vector<bool> uses(edges_.size(), false);
    for (std::size_t e : path) uses[e] = true;
    paths_.push_back(std::move(path));
    uses_.push_back(std::move(uses));
  }
}

const std::vector<std::size_t>& FlowInstance::path(std::size_t bidder) const {
  if (bidder >= paths_.size()) {
    throw StructuralError("bidder " + std::to_string(bidder) + " out of range");
  }
  return paths_[bidder];
}

bool FlowInstance::uses(std::size_t bidder, std::size_t edge) const {
  return uses_.at(bidder).at(edge);
}

Rational FlowInstance::load(std::size_t bidder, std::size_t edge) const {
  if (!uses(bidder, edge)) return 0;
  return bidders_[bidder].demand / edges_[edge].capacity;
}

std::vector<std::size_t> unique_path(const FlowInstance& instance,
                                     std::size_t bidder) {
  return instance.path(bidder);
}

Rational competition(const FlowInstance& instance, std::size_t edge,
                     const std::vector<bool>& active) {
  if (edge >= instance.edges().size()) {
    throw StructuralError("edge " + std::to_string(edge) + " out of range");
  }
  Rational total = 0;
  for (std::size_t i = 0; i < instance.bidders().size(); ++i) {
    if (i < active.size() && active[i]) total += instance.load(i, edge);
  }
  return total;
}

std::string describe(const AlgorithmTrace& trace) {
  std::ostringstream out;
  out << "budgets:";
  for (const auto& b : trace.initial_budgets) out << ' ' << b;
  out << '\n';
  if (!trace.excluded.empty()) {
    out << "excluded:";
    for (std::size_t i : trace.excluded) out << ' ' << i;
    out << '\n';
  }
  for (const auto& ev : trace.buy_ins) {
    out << "buy-in on edge " << ev.edge << " (competition " << ev.competition
        << "): " << ev.amount << "; charges";
    for (const auto& [i, c] : ev.charges) out << ' ' << i << ':' << c;
    out << "; eliminated";
    for (std::size_t i : ev.eliminated) out << ' ' << i;
    out << '\n';
  }
  out << "elimination order:";
  for (std::size_t i : trace.elimination_order) out << ' ' << i;
  out << "\nfinal budgets:";
  for (const auto& b : trace.final_budgets) out << ' ' << b;
  out << '\n';
  for (const auto& fill : trace.fills) {
    out << "fill bidder " << fill.bidder;
    if (fill.edge) out << " on edge " << *fill.edge;
    out << ": " << fill.fraction << '\n';
  }
  return out.str();
}

CombinatorialResult run_combinatorial(const FlowInstance& instance,
                                      ProfileIndex profile,
                                      std::span<const IroningResult> schedules,
                                      const TieBreakRule& tie_break) {
  const Instance& market = instance.market();
  const std::size_t n = market.bidders();
  const std::size_t m = instance.edges().size();
  if (schedules.size() != n) {
    throw StructuralError("run_combinatorial: " +
                          std::to_string(schedules.size()) +
                          " schedules for " + std::to_string(n) + " bidders");
  }
  if (profile >= market.profiles().size()) {
    throw StructuralError("profile " + std::to_string(profile) +
                          " out of range");
  }
  const std::vector<std::size_t> order = tie_break.order(n);
  const Rational f = market.probability(profile);

  CombinatorialResult result;
  AlgorithmTrace& trace = result.trace;
  FlowKktCertificate& cert = result.certificate;
  cert.eta.assign(m, Rational(0));
  trace.last_edge.assign(n, std::nullopt);

  std::vector<Rational> budget(n);
  std::vector<bool> active(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    budget[i] =
        f * schedules[i].schedule.ironed.at(market.profiles().coordinate(profile, i));
    active[i] = sgn(budget[i]) >= 0;
    if (!active[i]) trace.excluded.push_back(i);
  }
  trace.initial_budgets = budget;
  auto breach = [&](const std::string& what) {
    throw InvariantError("flow algorithm: " + what + "\n" + describe(trace));
  };

  // Every round eliminates the bidder attaining the minimum, so at most n.
  for (std::size_t round = 0; round <= n; ++round) {
    std::optional<std::size_t> edge;
    Rational highest = 1;
    for (std::size_t e = 0; e < m; ++e) {
      Rational c = competition(instance, e, active);
      if (c > highest) {
        highest = std::move(c);
        edge = e;
      }
    }
    if (!edge) break;
    if (round == n) breach("competitive edge left after n rounds");
    const std::size_t e = *edge;
    const Rational& capacity = instance.edges()[e].capacity;

    BuyInEvent event;
    event.edge = e;
    event.competition = highest;
    bool first = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i] || !instance.uses(i, e)) continue;
      Rational price = budget[i] * capacity / instance.bidders()[i].demand;
      if (first || price < event.amount) event.amount = std::move(price);
      first = false;
    }
    cert.eta[e] += event.amount;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i] || !instance.uses(i, e)) continue;
      Rational charge = instance.load(i, e) * event.amount;
      budget[i] -= charge;
      event.charges.emplace_back(i, std::move(charge));
      if (sgn(budget[i]) < 0) breach("budget of bidder " + std::to_string(i) +
                                     " went negative");
    }
    for (std::size_t i : order) {
      if (active[i] && instance.uses(i, e) && sgn(budget[i]) == 0) {
        active[i] = false;
        trace.last_edge[i] = e;
        event.eliminated.push_back(i);
      }
    }
    trace.elimination_order.insert(trace.elimination_order.begin(),
                                   event.eliminated.begin(),
                                   event.eliminated.end());
    trace.buy_ins.push_back(std::move(event));
  }
  trace.final_budgets = budget;

  cert.psi.assign(n, Rational(0));
  result.allocation.assign(n, Rational(0));
  std::vector<Rational> used(m, Rational(0));
  auto ship = [&](std::size_t i, const Rational& fraction) {
    result.allocation[i] = fraction;
    for (std::size_t e : instance.path(i)) {
      used[e] += instance.bidders()[i].demand * fraction;
      if (used[e] > instance.edges()[e].capacity) {
        breach("edge " + std::to_string(e) + " overfull after bidder " +
               std::to_string(i));
      }
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (!active[i]) continue;
    cert.psi[i] = budget[i];  // >= 0 for active bidders
    ship(i, Rational(1));
    trace.fills.push_back({i, std::nullopt, Rational(1)});
  }
  for (std::size_t i : trace.elimination_order) {
    const Rational& demand = instance.bidders()[i].demand;
    Rational fraction = 1;
    std::optional<std::size_t> binding;
    for (std::size_t e : instance.path(i)) {
      Rational room = (instance.edges()[e].capacity - used[e]) / demand;
      if (!binding || room < fraction) {
        if (room < fraction) fraction = room;
        binding = e;
      }
    }
    if (sgn(fraction) < 0) breach("negative leftover for bidder " +
                                  std::to_string(i));
    ship(i, fraction);
    trace.fills.push_back({i, binding, fraction});
  }

  cert.kappa.assign(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    Rational priced = cert.psi[i];
    for (std::size_t e : instance.path(i)) {
      priced += instance.load(i, e) * cert.eta[e];
    }
    cert.kappa[i] = priced - trace.initial_budgets[i];
  }
  return result;
}

FlowAuction build_flow_auction(const FlowInstance& instance,
                               const TieBreakRule& tie_break) {
  const Instance& market = instance.market();
  const auto schedules = ironed_schedules(market, instance.alpha());
  FlowAuction auction{AuctionTable(market.bidders(), market.profiles().size()),
                      {},
                      {}};
  for (ProfileIndex q = 0; q < market.profiles().size(); ++q) {
    auto run = run_combinatorial(instance, q, schedules, tie_break);
    for (std::size_t i = 0; i < market.bidders(); ++i) {
      auction.table.set_allocation(i, q, run.allocation[i]);
    }
    auction.certificates.push_back(std::move(run.certificate));
    auction.traces.push_back(std::move(run.trace));
  }
  apply_payment_rule(market, auction.table);
  return auction;
}

std::string_view to_string(FlowKktLine line) {
  switch (line) {
    case FlowKktLine::kAllocationBounds: return "0 <= a <= 1";
    case FlowKktLine::kCapacity: return "capacity";
    case FlowKktLine::kDualFeasibility: return "eta, psi, kappa >= 0";
    case FlowKktLine::kDualEquation: return "dual equation";
    case FlowKktLine::kFullAllocationSlackness: return "psi > 0 => a = 1";
    case FlowKktLine::kNonnegativitySlackness: return "kappa > 0 => a = 0";
    case FlowKktLine::kCapacitySlackness: return "eta > 0 => edge saturated";
  }
  return "?";
}

FlowKktReport verify_flow_kkt(const FlowInstance& instance,
                              ProfileIndex profile,
                              std::span<const Rational> allocation,
                              const FlowKktCertificate& certificate) {
  const auto schedules =
      ironed_schedules(instance.market(), instance.alpha());
  return verify_flow_kkt(instance, profile, allocation, certificate, schedules);
}

FlowKktReport verify_flow_kkt(const FlowInstance& instance,
                              ProfileIndex profile,
                              std::span<const Rational> allocation,
                              const FlowKktCertificate& cert,
                              std::span<const IroningResult> schedules) {
  const Instance& market = instance.market();
  const std::size_t n = market.bidders();
  const std::size_t m = instance.edges().size();
  if (allocation.size() != n || cert.psi.size() != n ||
      cert.kappa.size() != n || cert.eta.size() != m || schedules.size() != n) {
    throw StructuralError("verify_flow_kkt: sizes do not match the instance");
  }
  if (profile >= market.profiles().size()) {
    throw StructuralError("profile " + std::to_string(profile) +
                          " out of range");
  }
  FlowKktReport report;
  auto fail = [&](FlowKktLine line, std::optional<std::size_t> edge,
                  std::optional<std::size_t> bidder, std::string detail) {
    report.violations.push_back({line, edge, bidder, std::move(detail)});
  };
  const Rational f = market.probability(profile);

  for (std::size_t i = 0; i < n; ++i) {
    const std::string who = "bidder " + std::to_string(i);
    const Rational& a = allocation[i];
    if (sgn(a) < 0 || a > 1) {
      fail(FlowKktLine::kAllocationBounds, std::nullopt, i,
           who + " allocated " + to_string(a));
    }
    if (sgn(cert.psi[i]) < 0) {
      fail(FlowKktLine::kDualFeasibility, std::nullopt, i,
           who + ": psi " + to_string(cert.psi[i]));
    }
    if (sgn(cert.kappa[i]) < 0) {
      fail(FlowKktLine::kDualFeasibility, std::nullopt, i,
           who + ": kappa " + to_string(cert.kappa[i]));
    }
    Rational lhs = cert.psi[i] - cert.kappa[i];
    for (std::size_t e : instance.path(i)) lhs += instance.load(i, e) * cert.eta[e];
    const Rational rhs =
        f * schedules[i].schedule.ironed.at(market.profiles().coordinate(profile, i));
    if (lhs != rhs) {
      fail(FlowKktLine::kDualEquation, std::nullopt, i,
           who + ": " + to_string(lhs) + " != f * ironed = " + to_string(rhs));
    }
    if (sgn(cert.psi[i]) > 0 && a != 1) {
      fail(FlowKktLine::kFullAllocationSlackness, std::nullopt, i,
           who + ": psi " + to_string(cert.psi[i]) + " but a = " + to_string(a));
    }
    if (sgn(cert.kappa[i]) > 0 && sgn(a) != 0) {
      fail(FlowKktLine::kNonnegativitySlackness, std::nullopt, i,
           who + ": kappa " + to_string(cert.kappa[i]) + " but a = " +
               to_string(a));
    }
  }
  for (std::size_t e = 0; e < m; ++e) {
    const std::string which = "edge " + std::to_string(e);
    Rational utilization = 0;
    for (std::size_t i = 0; i < n; ++i) {
      utilization += instance.load(i, e) * allocation[i];
    }
    if (utilization > 1) {
      fail(FlowKktLine::kCapacity, e, std::nullopt,
           which + " carries " + to_string(utilization) + " of its capacity");
    }
    if (sgn(cert.eta[e]) < 0) {
      fail(FlowKktLine::kDualFeasibility, e, std::nullopt,
           which + ": eta " + to_string(cert.eta[e]));
    } else if (sgn(cert.eta[e]) > 0 && utilization != 1) {
      fail(FlowKktLine::kCapacitySlackness, e, std::nullopt,
           which + ": eta " + to_string(cert.eta[e]) + " but utilization " +
               to_string(utilization));
    }
  }
  return report;
}

}  // namespace optauction
