#pragma once

// Virtual values, alpha-mixed virtual values and ironing.
//
// For a prior with values v_0 < ... < v_{K-1}, masses f and cumulative F:
//
//   phi(k)       = v_k - (v_{k+1} - v_k) (1 - F(k)) / f(k),   phi(K-1) = v_{K-1}
//   phi^a(k)     = v_k - a (v_{k+1} - v_k) (1 - F(k)) / f(k)
//   ironed(k)    = raw(k) + tau[k] / f(k) - tau[k+1] / f(k)
//
// with tau[0] = tau[K] = 0. The ironed schedule is the sequence of slopes of
// the lower convex hull of the points (F_k, S_k), S_k = sum_{j<=k} raw(j) f(j).

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "optauction/core_model.hpp"
#include "optauction/rational.hpp"

namespace optauction {

struct VirtualSchedule {
  std::vector<Rational> raw;
  std::vector<Rational> ironed;
  // Objective mix the raw schedule was computed for; empty when iron() was
  // handed an arbitrary sequence.
  std::optional<Rational> alpha;
};

// Inclusive range of value indices sharing one ironed value.
struct IronedInterval {
  std::size_t first = 0;
  std::size_t last = 0;
  bool operator==(const IronedInterval&) const = default;
};

struct IroningCertificate {
  // tau[k] is the multiplier between indices k and k-1; tau[0] == 0. The
  // multiplier above the top index is implicitly 0.
  std::vector<Rational> tau;
  std::vector<IronedInterval> intervals;
};

struct IroningResult {
  VirtualSchedule schedule;
  IroningCertificate certificate;
};

// Throws DomainError unless 0 <= alpha <= 1.
void validate_alpha(const Rational& alpha);

std::vector<Rational> virtual_values(const DiscretePrior& prior);
std::vector<Rational> generalized_virtual_values(const DiscretePrior& prior,
                                                 const Rational& alpha);

// Irons `raw` against positive `masses` (StructuralError on length mismatch
// or an empty sequence, DomainError on a non-positive mass). Equal-slope
// hull segments are merged, so every reported interval is maximal.
IroningResult iron(std::span<const Rational> raw,
                   std::span<const Rational> masses);

IroningResult ironed_schedule(const DiscretePrior& prior,
                              const Rational& alpha);
std::vector<IroningResult> ironed_schedules(const Instance& instance,
                                            const Rational& alpha);

}  // namespace optauction
