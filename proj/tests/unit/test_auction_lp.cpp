#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "optauction/auction_lp.hpp"
#include "optauction/error.hpp"
#include "optauction/single_item.hpp"
#include "optauction/truthfulness.hpp"

using namespace optauction;
using namespace optauction::testing;

namespace {

Rational dual_of(const AuctionLp& lp, const LpSolution& s, const std::string& label) {
  for (std::size_t r = 0; r < lp.program.row_count(); ++r) {
    if (lp.program.row(r).label == label) return s.dual[r];
  }
  ADD_FAILURE() << "no row " << label;
  return Rational(-1);
}

Rational optimum_of(LpKind kind, const Instance& inst) {
  const AuctionLp lp = build_auction_lp(kind, inst);
  const LpSolution s = solve(lp.program);
  EXPECT_EQ(s.status, LpStatus::kOptimal);
  return s.optimum;
}

}  // namespace

TEST(BuildLp1, RowCountSingleBidder) {
  const AuctionLp lp = build_lp1(instance_of({uniform12()}));
  EXPECT_EQ(lp.program.variables(), 4u);
  // down K + up K + monotonicity K + feasibility K.
  EXPECT_EQ(lp.program.row_count(), 8u);
  EXPECT_EQ(rows_with_role(lp, RowRole::kDown).size(), 2u);
  EXPECT_EQ(rows_with_role(lp, RowRole::kUp).size(), 2u);
  EXPECT_EQ(rows_with_role(lp, RowRole::kMonotonicity).size(), 2u);
  EXPECT_EQ(rows_with_role(lp, RowRole::kFeasibility).size(), 2u);
}

TEST(BuildLp1, DroppingTopBorder) {
  BuildOptions opts;
  opts.include_top_border = false;
  const AuctionLp lp = build_lp1(two_uniform123(), opts);
  // 2 bidders * 3 opponent columns lose their top up row.
  EXPECT_EQ(rows_with_role(lp, RowRole::kUp).size(), 2u * 3u * 2u);
  EXPECT_EQ(solve(lp.program).optimum, 2);
}

TEST(BuildLp1, SingleBidderMatchesBlp1) {
  Rng rng(61);
  for (int t = 0; t < 10; ++t) {
    const Instance inst = random_instance(rng, 1, 4);
    const AuctionLp a = build_lp1(inst), b = build_blp1(inst);
    ASSERT_EQ(a.program.row_count(), b.program.row_count());
    ASSERT_EQ(a.program.variables(), b.program.variables());
    EXPECT_EQ(a.program.objective(), b.program.objective());
    for (std::size_t r = 0; r < a.program.row_count(); ++r) {
      EXPECT_EQ(a.program.row(r).label, b.program.row(r).label);
      EXPECT_EQ(a.program.dense_row(r), b.program.dense_row(r));
      EXPECT_EQ(a.program.row(r).relation, b.program.row(r).relation);
      EXPECT_EQ(a.program.row(r).rhs, b.program.row(r).rhs);
    }
  }
}

TEST(BuildLp1, Optima) {
  EXPECT_EQ(optimum_of(LpKind::kLp1, one_uniform123()), ratio(4, 3));
  EXPECT_EQ(optimum_of(LpKind::kLp1, two_uniform123()), 2);
  EXPECT_EQ(optimum_of(LpKind::kLp1, instance_of({DiscretePrior::uniform({5})})), 5);
}

TEST(BuildLp1, DownwardDualsSingleBidder) {
  // With upward multipliers at zero the payment columns force
  // lambda(k, k-1) = 1 - F(k-1).
  const Instance inst = one_uniform123();
  const AuctionLp lp = build_lp1(inst);
  const LpSolution s = solve(lp.program);
  EXPECT_EQ(dual_of(lp, s, "lambda_0(0,-1)"), 1);
  EXPECT_EQ(dual_of(lp, s, "lambda_0(1,0)"), ratio(2, 3));
  EXPECT_EQ(dual_of(lp, s, "lambda_0(2,1)"), ratio(1, 3));
}

TEST(BuildLp2, ObjectiveAtPostedPriceColumn) {
  const Instance inst = one_uniform123();
  const AuctionLp lp = build_lp2(inst);
  std::vector<Rational> x(lp.layout.size(), Rational(0));
  x[lp.layout.allocation(0, 1)] = 1;
  x[lp.layout.allocation(0, 2)] = 1;
  x[lp.layout.payment(0, 1)] = 2;
  x[lp.layout.payment(0, 2)] = 2;
  EXPECT_EQ(lp.program.objective_value(x), ratio(4, 3));
  for (std::size_t r = 0; r < lp.program.row_count(); ++r) {
    const Rational act = lp.program.activity(r, x);
    if (lp.program.row(r).relation == Relation::kEqual) {
      EXPECT_EQ(act, lp.program.row(r).rhs) << lp.program.row(r).label;
    } else {
      EXPECT_LE(act, lp.program.row(r).rhs) << lp.program.row(r).label;
    }
  }
}

TEST(BuildLp2, FeasibilityDualsOnFullyAllocatedProfiles) {
  const Instance inst = two_uniform123();
  const AuctionLp lp = build_lp2(inst);
  const LpSolution s = solve(lp.program);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_TRUE(check_complementary_slackness(lp.program, s).empty());
  for (std::size_t r : rows_with_role(lp, RowRole::kFeasibility)) {
    const ProfileIndex q = *lp.roles[r].profile;
    const Rational total =
        s.primal[lp.layout.allocation(0, q)] + s.primal[lp.layout.allocation(1, q)];
    EXPECT_EQ(s.dual[r] > 0, total == 1) << lp.program.row(r).label;
  }
}

TEST(BuildLp2, TableFromSolutionIsTruthful) {
  const Instance inst = two_uniform123();
  const AuctionLp lp = build_lp2(inst);
  const LpSolution s = solve(lp.program);
  const AuctionTable t = table_from_solution(inst, lp, s);
  EXPECT_EQ(expected_revenue(inst, t), 2);
  EXPECT_TRUE(check_dsic(inst, t, CheckMode::kFull).empty());
}

TEST(BuildLp, ChainOptimaAgreeOnRandomInstances) {
  Rng rng(62);
  for (int t = 0; t < 25; ++t) {
    const Instance inst = random_instance(rng, uniform_index(rng, 1, 2), 3);
    const Rational lp1 = optimum_of(LpKind::kLp1, inst);
    EXPECT_EQ(optimum_of(LpKind::kBlp1, inst), lp1);
    EXPECT_EQ(optimum_of(LpKind::kLp2, inst), lp1);
    EXPECT_EQ(optimum_of(LpKind::kBlp2, inst), lp1);
    EXPECT_EQ(best_deterministic_revenue(inst), lp1);
  }
}

TEST(BuildLp, SizeGuard) {
  BuildOptions opts;
  opts.variable_cap = 18;
  EXPECT_THROW(build_lp1(iid_uniform(3, {1, 2, 3}), opts), SizeGuardError);
  EXPECT_NO_THROW(build_lp1(two_uniform123(), opts));
  EXPECT_THROW(verify_chain(iid_uniform(3, {1, 2, 3}), {opts, {}}), SizeGuardError);
}

TEST(VerifyChain, TwoUniformBidders) {
  const ChainReport r = verify_chain(two_uniform123());
  EXPECT_EQ(r.optimum(), 2);
  EXPECT_EQ(r.lp2.solution.optimum, 2);
  EXPECT_EQ(r.blp1.solution.optimum, 2);
  EXPECT_EQ(r.blp2.solution.optimum, 2);
  for (std::size_t row : rows_with_role(r.lp1.lp, RowRole::kDown)) {
    EXPECT_GT(r.lp1.solution.dual[row], 0);
  }
  EXPECT_FALSE(downward_failure(r.lp1.lp, r.lp1.solution).has_value());
}

TEST(VerifyChain, SmallInstances) {
  EXPECT_EQ(verify_chain(instance_of({uniform12()})).optimum(), 1);
  EXPECT_EQ(verify_chain(instance_of({DiscretePrior::uniform({5})})).optimum(), 5);
}

TEST(DownwardFailure, DetectsZeroMultiplier) {
  const Instance inst = one_uniform123();
  const AuctionLp lp = build_lp1(inst);
  LpSolution s = solve(lp.program);
  const std::size_t row = rows_with_role(lp, RowRole::kDown).front();
  s.dual[row] = 0;
  const auto failure = downward_failure(lp, s);
  ASSERT_TRUE(failure.has_value());
  EXPECT_NE(failure->find(lp.program.row(row).label), std::string::npos);
}
