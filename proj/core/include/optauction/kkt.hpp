#pragma once

// Generalized objective alpha * revenue + (1 - alpha) * welfare over an
// arbitrary per-profile convex feasibility space, and the KKT certificate
// that proves a table optimal:
//
//   p = C a,  M a <= 0,  G(a) <= 0,
//   grad G(a)^T psi = f * phi^alpha - M^T tau,
//   tau, psi >= 0,  (M a)^T tau = 0,  G(a)^T psi = 0.
//
// M holds the monotonicity rows a_i(k-1) - a_i(k) <= 0 for k >= 1, either
// per opponents' profile (DSIC shape) or in expectation over them (BIC
// shape). Non-negativity of allocations belongs to G.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "optauction/auction_lp.hpp"
#include "optauction/core_model.hpp"
#include "optauction/rational.hpp"
#include "optauction/single_item.hpp"

namespace optauction {

// coefficients . a <= rhs over one profile's n allocation entries.
struct LinearConstraint {
  std::string label;
  std::vector<Rational> coefficients;
  Rational rhs;
};

// g(a) <= 0 for a convex, continuously differentiable g, evaluated in
// floating point.
struct SmoothConstraint {
  std::string name;
  std::function<double(std::span<const double>)> value;
  std::function<std::vector<double>(std::span<const double>)> gradient;
};

using FeasibilityConstraint = std::variant<LinearConstraint, SmoothConstraint>;

// Built-in smooth constraints by name: "unit-ball" (sum_i a_i^2 <= 1).
// StructuralError for unknown names.
SmoothConstraint smooth_constraint(std::string_view name);

// The m constraints imposed at every profile.
class FeasibilitySpec {
 public:
  explicit FeasibilitySpec(std::size_t bidders) : bidders_(bidders) {}

  // a_i >= 0 and sum_i a_i <= 1.
  static FeasibilitySpec simplex(std::size_t bidders);
  // a_i >= 0 and a_i <= 1, no coupling.
  static FeasibilitySpec digital_goods(std::size_t bidders);
  // a_i >= 0, a_i <= 1 and sum_i a_i <= units.
  static FeasibilitySpec units(std::size_t bidders, std::size_t units);

  // StructuralError if the coefficient count is not the bidder count.
  void add_linear(std::string label, std::vector<Rational> coefficients,
                  Rational rhs);
  void add_smooth(SmoothConstraint constraint);

  std::size_t bidders() const { return bidders_; }
  std::size_t size() const { return constraints_.size(); }
  const std::vector<FeasibilityConstraint>& constraints() const {
    return constraints_;
  }
  bool linear() const;

 private:
  std::size_t bidders_;
  std::vector<FeasibilityConstraint> constraints_;
};

struct PointwiseSolution {
  std::vector<Rational> allocation;
  std::vector<Rational> multipliers;  // one per constraint, >= 0
  Rational value;
};

// Maximizes sum_i weights_i a_i over a linear spec at a vertex. Among optimal
// points, bidders in tie-break order successively maximize their own entry,
// so a zero weight still takes what it can. The multipliers are the duals of
// the first (unrefined) maximization. PreconditionError for smooth
// constraints; StructuralError for an infeasible or unbounded spec.
PointwiseSolution pointwise_solve(std::span<const Rational> weights,
                                  const FeasibilitySpec& feasibility,
                                  const TieBreakRule& tie_break);
std::vector<Rational> pointwise_maximize(std::span<const Rational> weights,
                                         const FeasibilitySpec& feasibility,
                                         const TieBreakRule& tie_break);

// Pointwise maximization of ironed generalized virtual welfare, then
// payments by the column-wise payment formula.
AuctionTable build_general_auction(
    const Instance& instance, const Rational& alpha,
    const FeasibilitySpec& feasibility,
    const TieBreakRule& tie_break = TieBreakRule::lexicographic());

enum class CertificateShape { kDsic, kBic };

struct KktCertificate {
  CertificateShape shape = CertificateShape::kDsic;
  Rational alpha;
  // DSIC: tau[i][profile] = tau_i(k, k-1, opponents of profile), where k is
  // bidder i's coordinate in the profile. BIC: tau[i][k] = tau_i(k, k-1).
  // Entries at k = 0 have no row and must be zero.
  std::vector<std::vector<Rational>> tau;
  // psi[profile][j] for the j-th feasibility constraint.
  std::vector<std::vector<Rational>> psi;
};

// Ironing multipliers plus psi = f(k) * (pointwise LP duals), DSIC shape.
// Certifies build_general_auction for a linear spec.
KktCertificate assemble_certificate(const Instance& instance,
                                    const Rational& alpha,
                                    const FeasibilitySpec& feasibility,
                                    const TieBreakRule& tie_break =
                                        TieBreakRule::lexicographic());

// Transfers the duals of a solved LP2 (DSIC shape) or BLP2 (BIC shape) into
// a certificate for FeasibilitySpec::simplex at alpha = 1.
KktCertificate certificate_from_lp(const Instance& instance,
                                   const AuctionLp& lp,
                                   const LpSolution& solution);

// tau_i(k,k-1) = tau_i(k,k-1,o) / f_{-i}(o), which must not depend on o;
// CertificationError naming the first disagreeing opponents' profile.
KktCertificate dsic_to_bic_certificate(const KktCertificate& certificate,
                                       const Instance& instance);
KktCertificate bic_to_dsic_certificate(const KktCertificate& certificate,
                                       const Instance& instance);

enum class KktLine {
  kPaymentRule,
  kMonotonicity,
  kFeasibility,
  kStationarity,
  kDualFeasibility,
  kMonotonicitySlackness,
  kFeasibilitySlackness,
};
std::string_view to_string(KktLine line);

struct KktViolation {
  KktLine line;
  std::string detail;
};

struct KktReport {
  std::vector<KktViolation> violations;
  bool ok() const { return violations.empty(); }
};

struct KktOptions {
  // Absolute tolerance for checks that involve smooth constraints.
  double smooth_tolerance = 1e-9;
};

// Checks every line; linear parts exactly. StructuralError on shape
// mismatches (including a certificate alpha that differs from `alpha`).
KktReport verify_kkt(const Instance& instance, const Rational& alpha,
                     const FeasibilitySpec& feasibility,
                     const AuctionTable& table, const KktCertificate& certificate,
                     const KktOptions& options = {});

}  // namespace optauction
