#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "optauction/auction_lp.hpp"
#include "optauction/polyhedral.hpp"

using namespace optauction;
using namespace optauction::testing;

using IntMatrix = std::vector<std::vector<std::int64_t>>;

namespace {

// Every square submatrix by brute force through the cofactor oracle.
bool brute_force_tu(const IntMatrix& m) {
  const std::size_t R = m.size(), C = m.empty() ? 0 : m[0].size();
  for (std::uint32_t rm = 1; rm < (1u << R); ++rm) {
    for (std::uint32_t cm = 1; cm < (1u << C); ++cm) {
      if (__builtin_popcount(rm) != __builtin_popcount(cm)) continue;
      IntMatrix sub;
      for (std::size_t r = 0; r < R; ++r) {
        if (!(rm >> r & 1)) continue;
        std::vector<std::int64_t> row;
        for (std::size_t c = 0; c < C; ++c) {
          if (cm >> c & 1) row.push_back(m[r][c]);
        }
        sub.push_back(std::move(row));
      }
      const mpz_class d = laplace_determinant(sub);
      if (d < -1 || d > 1) return false;
    }
  }
  return true;
}

IntMatrix submatrix(const IntMatrix& m, const TuWitness& w) {
  IntMatrix out;
  for (std::size_t r : w.rows) {
    std::vector<std::int64_t> row;
    for (std::size_t c : w.columns) row.push_back(m[r][c]);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

TEST(BuildAllocationMatrix, SingleBidderTwoValues) {
  const ConstraintMatrix m = build_allocation_matrix(instance_of({uniform12()}));
  ASSERT_EQ(m.rows(), 3u);
  EXPECT_EQ(m.entries[0], (std::vector<std::int64_t>{1, -1}));
  EXPECT_EQ(m.entries[1], (std::vector<std::int64_t>{1, 0}));
  EXPECT_EQ(m.entries[2], (std::vector<std::int64_t>{0, 1}));
  EXPECT_EQ(m.rhs, (std::vector<std::int64_t>{0, 1, 1}));
  EXPECT_EQ(m.row_kinds[0], MatrixRowKind::kMonotonicity);
  EXPECT_EQ(m.row_kinds[2], MatrixRowKind::kFeasibility);
}

TEST(BuildAllocationMatrix, SingleValueBidders) {
  const Instance inst = instance_of({DiscretePrior::uniform({1}), DiscretePrior::uniform({2})});
  const ConstraintMatrix m = build_allocation_matrix(inst);
  ASSERT_EQ(m.rows(), 1u);
  EXPECT_EQ(m.entries[0], (std::vector<std::int64_t>{1, 1}));
}

TEST(BuildAllocationMatrix, RowAndColumnCounts) {
  Rng rng(71);
  for (int t = 0; t < 30; ++t) {
    const Instance inst = random_instance(rng, uniform_index(rng, 1, 3), 4);
    const ConstraintMatrix m = build_allocation_matrix(inst);
    const std::size_t P = inst.profiles().size();
    std::size_t mono = 0;
    for (std::size_t i = 0; i < inst.bidders(); ++i) {
      mono += (inst.prior(i).size() - 1) * (P / inst.prior(i).size());
    }
    EXPECT_EQ(m.rows(), mono + P);
    EXPECT_EQ(m.columns(), inst.bidders() * P);
    for (const auto& row : m.entries) {
      for (auto x : row) EXPECT_TRUE(x >= -1 && x <= 1);
    }
  }
}

TEST(WriteCsv, HeaderAndKinds) {
  std::ostringstream out;
  write_csv(build_allocation_matrix(instance_of({uniform12()})), out);
  EXPECT_EQ(out.str(),
            "kind,rhs,a_0(0),a_0(1)\n"
            "monotonicity,0,1,-1\n"
            "feasibility,1,1,0\n"
            "feasibility,1,0,1\n");
}

TEST(IsTotallyUnimodular, Identity) {
  const IntMatrix id{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const TuVerdict v = is_totally_unimodular(id);
  EXPECT_TRUE(v.totally_unimodular);
  EXPECT_TRUE(v.exhaustive);
}

TEST(IsTotallyUnimodular, KnownWitness) {
  const IntMatrix m{{1, 1}, {-1, 1}};
  const TuVerdict v = is_totally_unimodular(m);
  EXPECT_FALSE(v.totally_unimodular);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_EQ(v.witness->determinant, 2);
  EXPECT_EQ(laplace_determinant(submatrix(m, *v.witness)), 2);
}

TEST(IsTotallyUnimodular, EntryOutsideRange) {
  const IntMatrix m{{1, 0}, {0, 2}};
  const TuVerdict v = is_totally_unimodular(m);
  EXPECT_FALSE(v.totally_unimodular);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_EQ(v.witness->rows.size(), 1u);
  EXPECT_EQ(v.witness->determinant, 2);
}

TEST(IsTotallyUnimodular, TwoBiddersTwoValues) {
  const ConstraintMatrix m =
      build_allocation_matrix(instance_of({uniform12(), uniform12()}));
  const TuVerdict v = is_totally_unimodular(m);
  EXPECT_TRUE(v.totally_unimodular);
  EXPECT_TRUE(v.exhaustive);
  EXPECT_TRUE(brute_force_tu(m.entries));
}

TEST(IsTotallyUnimodular, SampledVerdictIsMarked) {
  const ConstraintMatrix m = build_allocation_matrix(iid_uniform(2, {1, 2, 3, 4}));
  TuOptions opts;
  opts.exhaustive_budget = 100;
  opts.samples = 2000;
  const TuVerdict v = is_totally_unimodular(m, opts);
  EXPECT_FALSE(v.exhaustive);
  EXPECT_TRUE(v.totally_unimodular);
}

TEST(IsTotallyUnimodular, AgreesWithCofactorOracle) {
  Rng rng(72);
  int non_tu = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t R = uniform_index(rng, 1, 4), C = uniform_index(rng, 1, 4);
    IntMatrix m(R, std::vector<std::int64_t>(C));
    for (auto& row : m) {
      for (auto& x : row) x = static_cast<std::int64_t>(uniform_index(rng, 0, 2)) - 1;
    }
    const TuVerdict v = is_totally_unimodular(m);
    ASSERT_TRUE(v.exhaustive);
    EXPECT_EQ(v.totally_unimodular, brute_force_tu(m));
    if (!v.totally_unimodular) {
      ++non_tu;
      ASSERT_TRUE(v.witness.has_value());
      const mpz_class d = laplace_determinant(submatrix(m, *v.witness));
      EXPECT_EQ(d, v.witness->determinant);
      EXPECT_TRUE(d < -1 || d > 1);
      EXPECT_EQ(subdeterminant(m, v.witness->rows, v.witness->columns), d);
    }
  }
  EXPECT_GT(non_tu, 10);
}

TEST(IsTotallyUnimodular, AllocationMatricesWithinGuard) {
  Rng rng(73);
  int exhaustive = 0;
  for (int t = 0; t < 40; ++t) {
    const Instance inst = random_instance(rng, uniform_index(rng, 1, 2), 3);
    const TuVerdict v = is_totally_unimodular(build_allocation_matrix(inst));
    EXPECT_TRUE(v.totally_unimodular);
    exhaustive += v.exhaustive;
  }
  EXPECT_GT(exhaustive, 0);
}

TEST(TdiFalsify, SingleItemSystem) {
  // n = 2, K = 1: -a <= 0 for both bidders and a_0 + a_1 <= 1.
  TdiSystem s;
  s.G = {{-1, 0}, {0, -1}, {1, 1}};
  s.b = {0, 0, 1};
  TdiOptions opts;
  opts.objectives = {{1, 1}};
  opts.samples = 0;
  const TdiVerdict v = tdi_falsify(s, opts);
  EXPECT_EQ(v.kind, TdiVerdict::Kind::kNoCounterexampleFound);
  EXPECT_EQ(v.evaluated, 1u);
  // Sampled objectives reach integral optima beyond psi_bound.
  opts.samples = 200;
  EXPECT_EQ(tdi_falsify(s, opts).kind, TdiVerdict::Kind::kNoCounterexampleFound);
}

TEST(TdiFalsify, TuSystemsHaveNoCounterexample) {
  // Both fit the falsifier's 8 x 12 limit once nonnegativity rows are added.
  const Instance small[] = {
      iid_uniform(1, Q({1, 2, 3})),
      instance_of({DiscretePrior(Q({1, 2}), Q({ratio(1, 2), ratio(1, 2)})),
                   DiscretePrior(Q({1}), Q({1}))})};
  for (const auto& inst : small) {
    const ConstraintMatrix m = build_allocation_matrix(inst);
    ASSERT_TRUE(is_totally_unimodular(m).totally_unimodular);
    const TdiVerdict v = tdi_falsify(tdi_system_from(m, true));
    EXPECT_EQ(v.kind, TdiVerdict::Kind::kNoCounterexampleFound);
    EXPECT_GT(v.evaluated, 0u);
  }
}

TEST(TdiFalsify, ScaledSystemWithOddObjective) {
  TdiSystem s;
  s.G = {{-2, 0}, {0, -2}, {2, 2}};
  s.b = {0, 0, 2};
  TdiOptions opts;
  opts.objectives = {{1, 1}};
  const TdiVerdict v = tdi_falsify(s, opts);
  ASSERT_EQ(v.kind, TdiVerdict::Kind::kCounterexample);
  EXPECT_EQ(v.c, (std::vector<std::int64_t>{1, 1}));
  // The optimal dual is the half-integral psi = (0, 0, 1/2).
  EXPECT_EQ(v.minimum, 1);
}

TEST(Integrality, VertexOptimaAreBinary) {
  Rng rng(74);
  for (int t = 0; t < 25; ++t) {
    const Instance inst = random_instance(rng, uniform_index(rng, 1, 2), 3);
    for (LpKind kind : {LpKind::kLp2, LpKind::kBlp2}) {
      const AuctionLp lp = build_auction_lp(kind, inst);
      const LpSolution s = solve(lp.program);
      for (std::size_t i = 0; i < inst.bidders(); ++i) {
        for (ProfileIndex q = 0; q < inst.profiles().size(); ++q) {
          const Rational& a = s.primal[lp.layout.allocation(i, q)];
          EXPECT_TRUE(a == 0 || a == 1) << to_string(kind) << " " << to_string(a);
        }
      }
    }
  }
}
