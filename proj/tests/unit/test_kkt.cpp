#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "generators.hpp"
#include "optauction/auction_lp.hpp"
#include "optauction/error.hpp"
#include "optauction/kkt.hpp"
#include "optauction/single_item.hpp"
#include "optauction/truthfulness.hpp"

using namespace optauction;
using namespace optauction::testing;

namespace {

bool has_line(const KktReport& r, KktLine line) {
  return std::any_of(r.violations.begin(), r.violations.end(),
                     [&](const auto& v) { return v.line == line; });
}

std::string dump(const KktReport& r) {
  std::string out;
  for (const auto& v : r.violations) {
    out += std::string(to_string(v.line)) + ": " + v.detail + "\n";
  }
  return out;
}

FeasibilitySpec random_spec(Rng& rng, std::size_t n) {
  switch (uniform_index(rng, 0, 3)) {
    case 0: return FeasibilitySpec::simplex(n);
    case 1: return FeasibilitySpec::digital_goods(n);
    case 2: return FeasibilitySpec::units(n, uniform_index(rng, 1, n));
    default: {
      // Non-negativity plus a random packing row and a knapsack row.
      FeasibilitySpec spec(n);
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<Rational> c(n, Rational(0));
        c[i] = -1;
        spec.add_linear("nonneg_" + std::to_string(i), c, 0);
      }
      std::vector<Rational> pack(n), knap(n);
      for (std::size_t i = 0; i < n; ++i) {
        pack[i] = 1;
        knap[i] = ratio(static_cast<long>(uniform_index(rng, 1, 3)), 1);
      }
      spec.add_linear("pack", pack, 1);
      spec.add_linear("knapsack", knap, ratio(static_cast<long>(uniform_index(rng, 1, 4)), 2));
      return spec;
    }
  }
}

}  // namespace

TEST(PointwiseMaximize, Simplex) {
  const auto lex = TieBreakRule::lexicographic();
  EXPECT_EQ(pointwise_maximize(Q({3, 1}), FeasibilitySpec::simplex(2), lex), Q({1, 0}));
  EXPECT_EQ(pointwise_maximize(Q({-1, -2, -3}), FeasibilitySpec::simplex(3), lex),
            Q({0, 0, 0}));
}

TEST(PointwiseMaximize, DigitalGoods) {
  EXPECT_EQ(pointwise_maximize(Q({2, -1, 3}), FeasibilitySpec::digital_goods(3),
                               TieBreakRule::lexicographic()),
            Q({1, 0, 1}));
}

TEST(PointwiseMaximize, TieBreakPrefersEarlierBidder) {
  EXPECT_EQ(pointwise_maximize(Q({2, 2}), FeasibilitySpec::simplex(2),
                               TieBreakRule::fixed_permutation({1, 0})),
            Q({0, 1}));
  // A zero weight still takes the item.
  EXPECT_EQ(pointwise_maximize(Q({0, -1}), FeasibilitySpec::simplex(2),
                               TieBreakRule::lexicographic()),
            Q({1, 0}));
}

TEST(PointwiseSolve, InfeasibleSpec) {
  FeasibilitySpec spec(1);
  spec.add_linear("nonneg", {-1}, 0);
  spec.add_linear("neg", {1}, -1);
  EXPECT_THROW(pointwise_solve(Q({1}), spec, TieBreakRule::lexicographic()),
               StructuralError);
}

TEST(PointwiseSolve, UnboundedSpec) {
  FeasibilitySpec spec(1);
  spec.add_linear("nonneg", {-1}, 0);
  EXPECT_THROW(pointwise_solve(Q({1}), spec, TieBreakRule::lexicographic()),
               StructuralError);
}

TEST(PointwiseSolve, SmoothNeedsLinear) {
  FeasibilitySpec spec(1);
  spec.add_smooth(smooth_constraint("unit-ball"));
  EXPECT_FALSE(spec.linear());
  EXPECT_THROW(pointwise_solve(Q({1}), spec, TieBreakRule::lexicographic()),
               PreconditionError);
  EXPECT_THROW(smooth_constraint("no-such"), StructuralError);
}

TEST(FeasibilitySpec, RejectsWrongWidth) {
  FeasibilitySpec spec(2);
  EXPECT_THROW(spec.add_linear("x", {1}, 1), StructuralError);
}

TEST(BuildGeneralAuction, SimplexMatchesSingleItem) {
  Rng rng(81);
  for (int t = 0; t < 20; ++t) {
    const Instance inst = random_instance(rng, uniform_index(rng, 1, 3), 3);
    EXPECT_EQ(build_general_auction(inst, 1, FeasibilitySpec::simplex(inst.bidders())),
              build_optimal_auction(inst, 1));
  }
}

TEST(BuildGeneralAuction, DigitalGoodPostedPrice) {
  const Instance inst = one_uniform123();
  const AuctionTable t = build_general_auction(inst, 1, FeasibilitySpec::digital_goods(1));
  EXPECT_EQ(t.allocation(0, 0), 0);
  EXPECT_EQ(t.payment(0, 1), 2);
  EXPECT_EQ(t.payment(0, 2), 2);
}

TEST(BuildGeneralAuction, TwoUnits) {
  const Instance inst = iid_uniform(3, {1, 2, 3});
  const AuctionTable t = build_general_auction(inst, 1, FeasibilitySpec::units(3, 2));
  const std::vector<std::size_t> idx{2, 2, 1};
  const ProfileIndex q = inst.profiles().encode(idx);
  EXPECT_EQ(t.allocation(0, q), 1);
  EXPECT_EQ(t.allocation(1, q), 1);
  EXPECT_EQ(t.allocation(2, q), 0);
}

TEST(BuildGeneralAuction, AlphaZeroMaximizesWelfare) {
  const Instance inst = two_uniform123();
  const AuctionTable t = build_general_auction(inst, 0, FeasibilitySpec::simplex(2));
  EXPECT_EQ(expected_welfare(inst, t), ratio(22, 9));
}

TEST(BuildGeneralAuction, TruthfulOnRandomSpecs) {
  Rng rng(82);
  for (int t = 0; t < 40; ++t) {
    const Instance inst = random_instance(rng, uniform_index(rng, 1, 3), 3);
    const Rational alpha = ratio(static_cast<long>(uniform_index(rng, 0, 4)), 4);
    const FeasibilitySpec spec = random_spec(rng, inst.bidders());
    const AuctionTable table = build_general_auction(inst, alpha, spec);
    EXPECT_TRUE(check_dsic(inst, table, CheckMode::kFull).empty());
    EXPECT_TRUE(check_bic(inst, table, CheckMode::kFull).empty());
  }
}

TEST(VerifyKkt, AssembledCertificatesPass) {
  Rng rng(83);
  for (int t = 0; t < 40; ++t) {
    const Instance inst = random_instance(rng, uniform_index(rng, 1, 3), 3);
    const Rational alpha = ratio(static_cast<long>(uniform_index(rng, 0, 4)), 4);
    const FeasibilitySpec spec = random_spec(rng, inst.bidders());
    const AuctionTable table = build_general_auction(inst, alpha, spec);
    const KktCertificate cert = assemble_certificate(inst, alpha, spec);
    const KktReport report = verify_kkt(inst, alpha, spec, table, cert);
    EXPECT_TRUE(report.ok()) << dump(report);
    const KktCertificate bic = dsic_to_bic_certificate(cert, inst);
    EXPECT_TRUE(verify_kkt(inst, alpha, spec, table, bic).ok());
    const KktCertificate back = bic_to_dsic_certificate(bic, inst);
    EXPECT_EQ(back.tau, cert.tau);
    EXPECT_EQ(back.psi, cert.psi);
  }
}

TEST(VerifyKkt, Lp2DualsCertifySingleItemAuction) {
  const Instance inst = two_uniform123();
  const AuctionLp lp = build_lp2(inst);
  const LpSolution sol = solve(lp.program);
  const KktCertificate cert = certificate_from_lp(inst, lp, sol);
  EXPECT_EQ(cert.shape, CertificateShape::kDsic);
  const KktReport r = verify_kkt(inst, 1, FeasibilitySpec::simplex(2),
                                 build_optimal_auction(inst, 1), cert);
  EXPECT_TRUE(r.ok()) << dump(r);
}

TEST(VerifyKkt, Blp2CertificateRoundTrips) {
  const Instance inst = two_uniform123();
  const FeasibilitySpec spec = FeasibilitySpec::simplex(2);
  const AuctionTable table = build_optimal_auction(inst, 1);
  const AuctionLp lp = build_blp2(inst);
  const KktCertificate bic = certificate_from_lp(inst, lp, solve(lp.program));
  EXPECT_EQ(bic.shape, CertificateShape::kBic);
  EXPECT_TRUE(verify_kkt(inst, 1, spec, table, bic).ok());
  const KktCertificate dsic = bic_to_dsic_certificate(bic, inst);
  EXPECT_TRUE(verify_kkt(inst, 1, spec, table, dsic).ok());
  const KktCertificate again = dsic_to_bic_certificate(dsic, inst);
  EXPECT_EQ(again.tau, bic.tau);
  EXPECT_EQ(again.psi, bic.psi);
}

TEST(VerifyKkt, PaymentPerturbation) {
  const Instance inst = two_uniform123();
  const FeasibilitySpec spec = FeasibilitySpec::simplex(2);
  AuctionTable table = build_optimal_auction(inst, 1);
  table.set_payment(0, 8, table.payment(0, 8) + 1);
  const KktReport r = verify_kkt(inst, 1, spec, table, assemble_certificate(inst, 1, spec));
  ASSERT_FALSE(r.ok());
  EXPECT_TRUE(has_line(r, KktLine::kPaymentRule));
  EXPECT_EQ(to_string(KktLine::kPaymentRule), "p = Ca");
  EXPECT_NE(r.violations[0].detail.find("(2,2)"), std::string::npos) << dump(r);
}

TEST(VerifyKkt, HandCertificateAtAlphaZero) {
  const Instance inst = two_uniform123();
  const FeasibilitySpec spec = FeasibilitySpec::simplex(2);
  const AuctionTable table = build_general_auction(inst, 0, spec);
  const ProfileSpace& s = inst.profiles();
  KktCertificate cert;
  cert.shape = CertificateShape::kDsic;
  cert.alpha = 0;
  cert.tau.assign(2, std::vector<Rational>(s.size(), Rational(0)));
  for (ProfileIndex q = 0; q < s.size(); ++q) {
    const Rational top = std::max(inst.value_at(0, q), inst.value_at(1, q));
    const Rational f = inst.probability(q);
    cert.psi.push_back({f * (top - inst.value_at(0, q)),
                        f * (top - inst.value_at(1, q)), f * top});
  }
  const KktReport r = verify_kkt(inst, 0, spec, table, cert);
  EXPECT_TRUE(r.ok()) << dump(r);

  // Dropping the supply multiplier breaks stationarity.
  cert.psi[4][2] = 0;
  EXPECT_TRUE(has_line(verify_kkt(inst, 0, spec, table, cert), KktLine::kStationarity));
}

TEST(VerifyKkt, NegativeMultiplier) {
  const Instance inst = one_uniform123();
  const FeasibilitySpec spec = FeasibilitySpec::simplex(1);
  const AuctionTable table = build_optimal_auction(inst, 1);
  KktCertificate cert = assemble_certificate(inst, 1, spec);
  cert.psi[0][0] = -1;
  EXPECT_TRUE(has_line(verify_kkt(inst, 1, spec, table, cert), KktLine::kDualFeasibility));
}

TEST(VerifyKkt, MonotonicityAndSlackness) {
  const Instance inst = one_uniform123();
  const FeasibilitySpec spec = FeasibilitySpec::simplex(1);
  AuctionTable table = AuctionTable::zeros(inst);
  table.set_allocation(0, 0, 1);  // column (1, 0, 0)
  apply_payment_rule(inst, table);
  const KktReport r = verify_kkt(inst, 1, spec, table, assemble_certificate(inst, 1, spec));
  EXPECT_TRUE(has_line(r, KktLine::kMonotonicity));
}

TEST(VerifyKkt, ShapeMismatch) {
  const Instance inst = one_uniform123();
  const FeasibilitySpec spec = FeasibilitySpec::simplex(1);
  KktCertificate cert = assemble_certificate(inst, 1, spec);
  EXPECT_THROW(verify_kkt(inst, ratio(1, 2), spec, build_optimal_auction(inst, 1), cert),
               StructuralError);
  cert.psi.pop_back();
  EXPECT_THROW(verify_kkt(inst, 1, spec, build_optimal_auction(inst, 1), cert),
               StructuralError);
}

TEST(VerifyKkt, SmoothUnitBall) {
  // One bidder with the single value 1: a = 1 sits on the unit ball with
  // gradient 2, so psi = f phi / 2 = 1/2.
  const Instance inst = instance_of({DiscretePrior::uniform({1})});
  FeasibilitySpec spec(1);
  spec.add_smooth(smooth_constraint("unit-ball"));
  AuctionTable table(1, 1);
  table.set(0, 0, 1, 1);
  KktCertificate cert;
  cert.alpha = 1;
  cert.tau = {{0}};
  cert.psi = {{ratio(1, 2)}};
  const KktReport ok = verify_kkt(inst, 1, spec, table, cert);
  EXPECT_TRUE(ok.ok()) << dump(ok);
  cert.psi = {{1}};
  EXPECT_TRUE(has_line(verify_kkt(inst, 1, spec, table, cert), KktLine::kStationarity));
}

TEST(CertificateConversion, ZeroTau) {
  const Instance inst = two_uniform123();
  KktCertificate cert;
  cert.alpha = 1;
  cert.tau.assign(2, std::vector<Rational>(9, Rational(0)));
  cert.psi.assign(9, std::vector<Rational>(3, Rational(0)));
  const KktCertificate bic = dsic_to_bic_certificate(cert, inst);
  EXPECT_EQ(bic.shape, CertificateShape::kBic);
  for (const auto& row : bic.tau) {
    for (const auto& x : row) EXPECT_EQ(x, 0);
  }
}

TEST(CertificateConversion, IroningTauScalesWithOpponentMass) {
  const Instance inst = instance_of({irregular_1_2_10(), uniform12()});
  const ProfileSpace& s = inst.profiles();
  KktCertificate bic;
  bic.shape = CertificateShape::kBic;
  bic.alpha = 1;
  bic.tau = {Q({0, ratio(5, 6), 0}), Q({0, 0})};
  bic.psi.assign(s.size(), std::vector<Rational>(3, Rational(0)));
  const KktCertificate dsic = bic_to_dsic_certificate(bic, inst);
  EXPECT_EQ(dsic.shape, CertificateShape::kDsic);
  for (ProfileIndex q = 0; q < s.size(); ++q) {
    const Rational expected = s.coordinate(q, 0) == 1 ? ratio(5, 12) : Rational(0);
    EXPECT_EQ(dsic.tau[0][q], expected);
  }
  EXPECT_EQ(dsic_to_bic_certificate(dsic, inst).tau, bic.tau);
}

TEST(CertificateConversion, NonProportionalTauRejected) {
  const Instance inst = instance_of({irregular_1_2_10(), uniform12()});
  const ProfileSpace& s = inst.profiles();
  KktCertificate dsic;
  dsic.alpha = 1;
  dsic.tau.assign(2, std::vector<Rational>(s.size(), Rational(0)));
  dsic.psi.assign(s.size(), std::vector<Rational>(3, Rational(0)));
  const std::vector<std::size_t> a{1, 0}, b{1, 1};
  dsic.tau[0][s.encode(a)] = ratio(5, 12);
  dsic.tau[0][s.encode(b)] = ratio(1, 12);
  EXPECT_THROW(dsic_to_bic_certificate(dsic, inst), CertificationError);
}
