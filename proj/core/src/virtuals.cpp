#include "optauction/virtuals.hpp"

#include <string>

#include "optauction/error.hpp"

namespace optauction {

void validate_alpha(const Rational& alpha) {
  if (sgn(alpha) < 0 || alpha > 1) {
    throw DomainError("alpha " + to_string(alpha) + " is outside [0,1]");
  }
}

std::vector<Rational> virtual_values(const DiscretePrior& prior) {
  return generalized_virtual_values(prior, Rational(1));
}

std::vector<Rational> generalized_virtual_values(const DiscretePrior& prior,
                                                 const Rational& alpha) {
  validate_alpha(alpha);
  const std::size_t K = prior.size();
  std::vector<Rational> phi(K);
  for (std::size_t k = 0; k + 1 < K; ++k) {
    const Rational gap = prior.value(k + 1) - prior.value(k);
    const Rational tail = 1 - prior.cumulative(k);
    phi[k] = prior.value(k) - alpha * gap * tail / prior.mass(k);
  }
  phi[K - 1] = prior.value(K - 1);
  return phi;
}

IroningResult iron(std::span<const Rational> raw,
                   std::span<const Rational> masses) {
  if (raw.size() != masses.size()) {
    throw StructuralError("ironing: " + std::to_string(raw.size()) +
                          " virtual values but " +
                          std::to_string(masses.size()) + " masses");
  }
  if (raw.empty()) throw StructuralError("ironing: empty schedule");
  for (std::size_t k = 0; k < masses.size(); ++k) {
    if (sgn(masses[k]) <= 0) {
      throw DomainError("ironing: mass " + std::to_string(k) +
                        " is not positive");
    }
  }

  const std::size_t K = raw.size();
  // Hull points are (x[j], y[j]) for j = 0..K, point j closing index j-1.
  std::vector<Rational> x(K + 1), y(K + 1);
  for (std::size_t k = 0; k < K; ++k) {
    x[k + 1] = x[k] + masses[k];
    y[k + 1] = y[k] + raw[k] * masses[k];
  }

  // Lower convex hull, monotone stack. A point is dropped unless the turn
  // it makes is strictly convex, which merges equal-slope segments.
  std::vector<std::size_t> hull;
  hull.reserve(K + 1);
  for (std::size_t j = 0; j <= K; ++j) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2];
      const std::size_t b = hull.back();
      const Rational cross =
          (x[b] - x[a]) * (y[j] - y[a]) - (y[b] - y[a]) * (x[j] - x[a]);
      if (sgn(cross) > 0) break;
      hull.pop_back();
    }
    hull.push_back(j);
  }

  IroningResult result;
  auto& schedule = result.schedule;
  auto& cert = result.certificate;
  schedule.raw.assign(raw.begin(), raw.end());
  schedule.ironed.resize(K);
  cert.tau.assign(K, Rational(0));

  for (std::size_t s = 0; s + 1 < hull.size(); ++s) {
    // Segment covers value indices first..last.
    const std::size_t first = hull[s];
    const std::size_t last = hull[s + 1] - 1;
    const Rational slope =
        (y[last + 1] - y[first]) / (x[last + 1] - x[first]);
    for (std::size_t k = first; k <= last; ++k) schedule.ironed[k] = slope;
    if (first == last) continue;
    cert.intervals.push_back({first, last});
    // Forward substitution through the bidiagonal system:
    // raw(k) + tau[k]/f(k) - tau[k+1]/f(k) = slope, tau[first] = 0.
    for (std::size_t k = first; k < last; ++k) {
      cert.tau[k + 1] = cert.tau[k] + masses[k] * (raw[k] - slope);
      if (sgn(cert.tau[k + 1]) < 0) {
        throw InvariantError("ironing produced a negative multiplier at " +
                             std::to_string(k + 1));
      }
    }
    if (raw[last] + cert.tau[last] / masses[last] != slope) {
      throw InvariantError("ironing system inconsistent on interval ending at " +
                           std::to_string(last));
    }
  }
  return result;
}

IroningResult ironed_schedule(const DiscretePrior& prior,
                              const Rational& alpha) {
  const auto raw = generalized_virtual_values(prior, alpha);
  IroningResult result = iron(raw, prior.masses());
  result.schedule.alpha = alpha;
  return result;
}

std::vector<IroningResult> ironed_schedules(const Instance& instance,
                                            const Rational& alpha) {
  std::vector<IroningResult> schedules;
  schedules.reserve(instance.bidders());
  for (const auto& prior : instance.priors()) {
    schedules.push_back(ironed_schedule(prior, alpha));
  }
  return schedules;
}

}  // namespace optauction
