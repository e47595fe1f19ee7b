#pragma once

#include <vector>

#include "optauction/core_model.hpp"
#include "optauction/rational.hpp"

namespace optauction::testing {

inline std::vector<Rational> Q(std::initializer_list<Rational> xs) { return xs; }

inline DiscretePrior uniform123() { return DiscretePrior::uniform({1, 2, 3}); }
inline DiscretePrior uniform12() { return DiscretePrior::uniform({1, 2}); }
inline DiscretePrior irregular_1_2_10() { return DiscretePrior::uniform({1, 2, 10}); }

inline Instance instance_of(std::vector<DiscretePrior> priors) {
  return Instance(std::move(priors));
}

inline Instance two_uniform123() { return instance_of({uniform123(), uniform123()}); }
inline Instance one_uniform123() { return instance_of({uniform123()}); }

}  // namespace optauction::testing
