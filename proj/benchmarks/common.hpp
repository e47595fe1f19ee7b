#pragma once

#include <vector>

#include "optauction/core_model.hpp"

namespace optauction::bench {

// n bidders with values 1..K, masses 1..K normalized; irregular enough to
// trigger ironing for K >= 3.
inline DiscretePrior ramp_prior(long K) {
  std::vector<Rational> values, masses;
  Rational total = 0;
  for (long k = 1; k <= K; ++k) total += (k % 3) + 1;
  for (long k = 1; k <= K; ++k) {
    values.emplace_back(k * k);
    Rational m((k % 3) + 1);
    m /= total;
    masses.push_back(m);
  }
  return DiscretePrior(values, masses);
}

inline Instance ramp_instance(std::size_t n, long K) {
  return Instance(std::vector<DiscretePrior>(n, ramp_prior(K)));
}

}  // namespace optauction::bench
