#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "optauction/error.hpp"
#include "optauction/virtuals.hpp"

using namespace optauction;
using namespace optauction::testing;

namespace {

std::vector<Rational> masses_of(const DiscretePrior& p) {
  return {p.masses().begin(), p.masses().end()};
}

}  // namespace

TEST(VirtualValues, TopIndexIsValue) {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const DiscretePrior p = random_prior(rng, uniform_index(rng, 1, 5));
    EXPECT_EQ(virtual_values(p).back(), p.value(p.size() - 1));
  }
}

TEST(VirtualValues, UniformOneTwoThree) {
  EXPECT_EQ(virtual_values(uniform123()), Q({-1, 1, 3}));
}

TEST(VirtualValues, Irregular) {
  EXPECT_EQ(virtual_values(irregular_1_2_10()), Q({-1, -6, 10}));
}

TEST(GeneralizedVirtualValues, AlphaZeroIsValue) {
  EXPECT_EQ(generalized_virtual_values(uniform123(), 0), Q({1, 2, 3}));
}

TEST(GeneralizedVirtualValues, AlphaOneIsVirtual) {
  EXPECT_EQ(generalized_virtual_values(uniform123(), 1), Q({-1, 1, 3}));
}

TEST(GeneralizedVirtualValues, AlphaHalf) {
  EXPECT_EQ(generalized_virtual_values(uniform123(), ratio(1, 2)),
            Q({0, ratio(3, 2), 3}));
}

TEST(GeneralizedVirtualValues, RejectsAlphaOutsideUnitInterval) {
  EXPECT_THROW(generalized_virtual_values(uniform123(), -1), DomainError);
  EXPECT_THROW(generalized_virtual_values(uniform123(), ratio(3, 2)), DomainError);
}

TEST(GeneralizedVirtualValues, ConvexCombination) {
  Rng rng(2);
  for (int t = 0; t < 30; ++t) {
    const DiscretePrior p = random_prior(rng, uniform_index(rng, 1, 5));
    const Rational a = random_ratio(rng, 4, 4);
    if (a > 1) continue;
    const auto phi = virtual_values(p);
    const auto mix = generalized_virtual_values(p, a);
    for (std::size_t k = 0; k < p.size(); ++k) {
      EXPECT_EQ(mix[k], a * phi[k] + (1 - a) * p.value(k));
    }
  }
}

TEST(Iron, AlreadyMonotone) {
  const auto r = iron(Q({-1, 1, 3}), Q({ratio(1, 3), ratio(1, 3), ratio(1, 3)}));
  EXPECT_EQ(r.schedule.ironed, Q({-1, 1, 3}));
  EXPECT_EQ(r.certificate.tau, Q({0, 0, 0}));
}

TEST(Iron, IrregularFixture) {
  const auto r = iron(Q({-1, -6, 10}), Q({ratio(1, 3), ratio(1, 3), ratio(1, 3)}));
  EXPECT_EQ(r.schedule.ironed, Q({ratio(-7, 2), ratio(-7, 2), 10}));
  EXPECT_EQ(r.certificate.tau, Q({0, ratio(5, 6), 0}));
  ASSERT_EQ(r.certificate.intervals.size(), 1u);
  EXPECT_EQ(r.certificate.intervals[0], (IronedInterval{0, 1}));
}

TEST(Iron, SinglePoint) {
  const auto r = iron(Q({ratio(-5, 3)}), Q({1}));
  EXPECT_EQ(r.schedule.ironed, Q({ratio(-5, 3)}));
  EXPECT_EQ(r.certificate.tau, Q({0}));
}

TEST(Iron, LengthMismatch) {
  EXPECT_THROW(iron(Q({1, 2}), Q({1})), StructuralError);
  EXPECT_THROW(iron(Q({}), Q({})), StructuralError);
  EXPECT_THROW(iron(Q({1, 2}), Q({0, 1})), DomainError);
}

TEST(Iron, EqualSlopesMerge) {
  // Raw (2, 0, 2, 0) with equal masses: the hull is one segment of slope 1.
  const auto r = iron(Q({2, 0, 2, 0}),
                      Q({ratio(1, 4), ratio(1, 4), ratio(1, 4), ratio(1, 4)}));
  EXPECT_EQ(r.schedule.ironed, Q({1, 1, 1, 1}));
  ASSERT_EQ(r.certificate.intervals.size(), 1u);
  EXPECT_EQ(r.certificate.intervals[0], (IronedInterval{0, 3}));
}

TEST(IronedSchedule, RecordsAlpha) {
  const auto r = ironed_schedule(irregular_1_2_10(), 1);
  ASSERT_TRUE(r.schedule.alpha.has_value());
  EXPECT_EQ(*r.schedule.alpha, 1);
  EXPECT_EQ(r.schedule.raw, Q({-1, -6, 10}));
}

class IroningProperties : public ::testing::Test {
 protected:
  template <typename F>
  void for_random_schedules(std::uint64_t seed, int count, F&& f) {
    Rng rng(seed);
    for (int t = 0; t < count; ++t) {
      const std::size_t K = uniform_index(rng, 1, 7);
      f(random_schedule(rng, K), random_masses(rng, K));
    }
  }
};

TEST_F(IroningProperties, NonDecreasing) {
  for_random_schedules(21, 300, [](const auto& raw, const auto& f) {
    const auto r = iron(raw, f);
    for (std::size_t k = 1; k < raw.size(); ++k) {
      EXPECT_LE(r.schedule.ironed[k - 1], r.schedule.ironed[k]);
    }
  });
}

TEST_F(IroningProperties, MatchesIsotonicRegression) {
  for_random_schedules(22, 300, [](const auto& raw, const auto& f) {
    EXPECT_EQ(iron(raw, f).schedule.ironed, isotonic_minmax(raw, f));
  });
}

TEST_F(IroningProperties, TauNonNegativeAndCloses) {
  for_random_schedules(23, 300, [](const auto& raw, const auto& f) {
    const auto r = iron(raw, f);
    const auto& tau = r.certificate.tau;
    ASSERT_EQ(tau.size(), raw.size());
    EXPECT_EQ(tau[0], 0);
    for (std::size_t k = 0; k < raw.size(); ++k) {
      EXPECT_GE(tau[k], 0);
      const Rational above = k + 1 < raw.size() ? tau[k + 1] : Rational(0);
      EXPECT_EQ(raw[k] + tau[k] / f[k] - above / f[k], r.schedule.ironed[k]);
    }
  });
}

TEST_F(IroningProperties, BoundaryTauVanishes) {
  for_random_schedules(24, 300, [](const auto& raw, const auto& f) {
    const auto r = iron(raw, f);
    for (const auto& iv : r.certificate.intervals) {
      EXPECT_EQ(r.certificate.tau[iv.first], 0);
      if (iv.last + 1 < raw.size()) EXPECT_EQ(r.certificate.tau[iv.last + 1], 0);
    }
  });
}

TEST_F(IroningProperties, IntervalsArePooledAndPreserveMean) {
  for_random_schedules(25, 300, [](const auto& raw, const auto& f) {
    const auto r = iron(raw, f);
    const auto& ironed = r.schedule.ironed;
    std::vector<bool> pooled(raw.size(), false);
    std::size_t next = 0;
    for (const auto& iv : r.certificate.intervals) {
      ASSERT_GE(iv.first, next);
      ASSERT_LT(iv.first, iv.last);
      ASSERT_LT(iv.last, raw.size());
      Rational ironed_mass = 0, raw_mass = 0;
      for (std::size_t k = iv.first; k <= iv.last; ++k) {
        EXPECT_EQ(ironed[k], ironed[iv.first]);
        ironed_mass += ironed[k] * f[k];
        raw_mass += raw[k] * f[k];
        pooled[k] = true;
      }
      EXPECT_EQ(ironed_mass, raw_mass);
      // Maximal: the neighbours sit on other levels.
      if (iv.first > 0) EXPECT_LT(ironed[iv.first - 1], ironed[iv.first]);
      if (iv.last + 1 < raw.size()) EXPECT_LT(ironed[iv.last], ironed[iv.last + 1]);
      next = iv.last + 1;
    }
    for (std::size_t k = 0; k < raw.size(); ++k) {
      if (!pooled[k]) EXPECT_EQ(ironed[k], raw[k]);
    }
  });
}

TEST_F(IroningProperties, IndependentResolveReproducesTau) {
  for_random_schedules(26, 300, [](const auto& raw, const auto& f) {
    const auto r = iron(raw, f);
    const auto tau = resolve_tau(raw, f, r.certificate.intervals);
    ASSERT_TRUE(tau.has_value());
    EXPECT_EQ(*tau, r.certificate.tau);
  });
}

TEST_F(IroningProperties, HullDominance) {
  for_random_schedules(27, 300, [](const auto& raw, const auto& f) {
    const auto r = iron(raw, f);
    Rational S = 0, H = 0;
    for (std::size_t k = 0; k < raw.size(); ++k) {
      S += raw[k] * f[k];
      H += r.schedule.ironed[k] * f[k];
      EXPECT_LE(H, S);
    }
    for (const auto& iv : r.certificate.intervals) {
      Rational s = 0, h = 0;
      for (std::size_t k = 0; k <= iv.last; ++k) {
        s += raw[k] * f[k];
        h += r.schedule.ironed[k] * f[k];
      }
      EXPECT_EQ(h, s);
    }
  });
}

TEST(GeneralizedIroning, MonotoneForEveryAlpha) {
  Rng rng(28);
  for (int t = 0; t < 60; ++t) {
    const DiscretePrior p = random_prior(rng, uniform_index(rng, 1, 6));
    for (const Rational a : {Rational(0), ratio(1, 4), ratio(1, 2), Rational(1)}) {
      const auto r = ironed_schedule(p, a);
      for (std::size_t k = 1; k < p.size(); ++k) {
        EXPECT_LE(r.schedule.ironed[k - 1], r.schedule.ironed[k]);
      }
      EXPECT_EQ(r.schedule.ironed, isotonic_minmax(r.schedule.raw, masses_of(p)));
    }
  }
}
