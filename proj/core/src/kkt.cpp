#include "optauction/kkt.hpp"

#include <cmath>
#include <map>
#include <string>

#include "optauction/error.hpp"
#include "optauction/lp.hpp"
#include "optauction/virtuals.hpp"

namespace optauction {

SmoothConstraint smooth_constraint(std::string_view name) {
  if (name == "unit-ball") {
    return {"unit-ball",
            [](std::span<const double> a) {
              double total = -1;
              for (double x : a) total += x * x;
              return total;
            },
            [](std::span<const double> a) {
              std::vector<double> g(a.begin(), a.end());
              for (double& x : g) x *= 2;
              return g;
            }};
  }
  throw StructuralError("unknown smooth constraint \"" + std::string(name) +
                        "\"");
}

// ---------------------------------------------------------------------------
// FeasibilitySpec

namespace {

void add_nonnegativity(FeasibilitySpec& spec) {
  for (std::size_t i = 0; i < spec.bidders(); ++i) {
    std::vector<Rational> row(spec.bidders(), Rational(0));
    row[i] = -1;
    spec.add_linear("nonneg_" + std::to_string(i), std::move(row), 0);
  }
}

void add_unit_caps(FeasibilitySpec& spec) {
  for (std::size_t i = 0; i < spec.bidders(); ++i) {
    std::vector<Rational> row(spec.bidders(), Rational(0));
    row[i] = 1;
    spec.add_linear("cap_" + std::to_string(i), std::move(row), 1);
  }
}

}  // namespace

FeasibilitySpec FeasibilitySpec::simplex(std::size_t bidders) {
  FeasibilitySpec spec(bidders);
  add_nonnegativity(spec);
  spec.add_linear("supply", std::vector<Rational>(bidders, Rational(1)), 1);
  return spec;
}

FeasibilitySpec FeasibilitySpec::digital_goods(std::size_t bidders) {
  FeasibilitySpec spec(bidders);
  add_nonnegativity(spec);
  add_unit_caps(spec);
  return spec;
}

FeasibilitySpec FeasibilitySpec::units(std::size_t bidders, std::size_t units) {
  FeasibilitySpec spec(bidders);
  add_nonnegativity(spec);
  add_unit_caps(spec);
  spec.add_linear("supply", std::vector<Rational>(bidders, Rational(1)),
                  static_cast<unsigned long>(units));
  return spec;
}

void FeasibilitySpec::add_linear(std::string label,
                                 std::vector<Rational> coefficients,
                                 Rational rhs) {
  if (coefficients.size() != bidders_) {
    throw StructuralError("constraint " + label + " has " +
                          std::to_string(coefficients.size()) +
                          " coefficients for " + std::to_string(bidders_) +
                          " bidders");
  }
  constraints_.emplace_back(
      LinearConstraint{std::move(label), std::move(coefficients), std::move(rhs)});
}

void FeasibilitySpec::add_smooth(SmoothConstraint constraint) {
  if (!constraint.value || !constraint.gradient) {
    throw StructuralError("smooth constraint " + constraint.name +
                          " lacks an evaluator");
  }
  constraints_.emplace_back(std::move(constraint));
}

bool FeasibilitySpec::linear() const {
  for (const auto& c : constraints_) {
    if (!std::holds_alternative<LinearConstraint>(c)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Pointwise maximization

PointwiseSolution pointwise_solve(std::span<const Rational> weights,
                                  const FeasibilitySpec& feasibility,
                                  const TieBreakRule& tie_break) {
  const std::size_t n = feasibility.bidders();
  if (weights.size() != n) {
    throw StructuralError("pointwise_maximize: " +
                          std::to_string(weights.size()) + " weights for " +
                          std::to_string(n) + " bidders");
  }
  if (!feasibility.linear()) {
    throw PreconditionError(
        "pointwise maximization needs linear feasibility constraints");
  }
  LpProgram lp(Sense::kMaximize);
  for (std::size_t i = 0; i < n; ++i) {
    lp.add_variable("a_" + std::to_string(i), weights[i]);
  }
  for (std::size_t j = 0; j < feasibility.size(); ++j) {
    const auto& c = std::get<LinearConstraint>(feasibility.constraints()[j]);
    std::vector<Term> terms;
    for (std::size_t i = 0; i < n; ++i) terms.push_back({i, c.coefficients[i]});
    lp.add_row("g" + std::to_string(j), std::move(terms), Relation::kLessEqual,
               c.rhs);
  }
  LpSolution first = solve(lp);
  if (first.status == LpStatus::kInfeasible) {
    throw StructuralError("feasibility spec admits no allocation");
  }
  if (first.status == LpStatus::kUnbounded) {
    throw StructuralError("feasibility spec is unbounded for these weights");
  }

  PointwiseSolution result;
  result.multipliers = first.dual;
  result.value = first.optimum;

  // Lexicographic refinement over the optimal face.
  std::vector<Term> objective_terms;
  for (std::size_t i = 0; i < n; ++i) objective_terms.push_back({i, weights[i]});
  lp.add_row("optimal", std::move(objective_terms), Relation::kEqual,
             first.optimum);
  std::vector<Rational> point = first.primal;
  for (std::size_t i : tie_break.order(n)) {
    for (std::size_t j = 0; j < n; ++j) lp.set_objective(j, j == i ? 1 : 0);
    LpSolution refined = solve(lp);
    if (refined.status != LpStatus::kOptimal) {
      throw StructuralError("feasibility spec is unbounded along bidder " +
                            std::to_string(i));
    }
    lp.add_row("fix_" + std::to_string(i), {{i, Rational(1)}}, Relation::kEqual,
               refined.optimum);
    point = std::move(refined.primal);
  }
  result.allocation = std::move(point);
  return result;
}

std::vector<Rational> pointwise_maximize(std::span<const Rational> weights,
                                         const FeasibilitySpec& feasibility,
                                         const TieBreakRule& tie_break) {
  return pointwise_solve(weights, feasibility, tie_break).allocation;
}

namespace {

void require_bidders(const Instance& instance, const FeasibilitySpec& spec) {
  if (spec.bidders() != instance.bidders()) {
    throw StructuralError("feasibility spec is for " +
                          std::to_string(spec.bidders()) + " bidders, instance has " +
                          std::to_string(instance.bidders()));
  }
}

// Profiles often share their weight vector; solve each distinct one once.
class PointwiseCache {
 public:
  PointwiseCache(const FeasibilitySpec& spec, const TieBreakRule& tie)
      : spec_(spec), tie_(tie) {}

  const PointwiseSolution& at(const std::vector<Rational>& weights) {
    auto it = cache_.find(weights);
    if (it == cache_.end()) {
      it = cache_.emplace(weights, pointwise_solve(weights, spec_, tie_)).first;
    }
    return it->second;
  }

 private:
  const FeasibilitySpec& spec_;
  const TieBreakRule& tie_;
  std::map<std::vector<Rational>, PointwiseSolution> cache_;
};

}  // namespace

AuctionTable build_general_auction(const Instance& instance,
                                   const Rational& alpha,
                                   const FeasibilitySpec& feasibility,
                                   const TieBreakRule& tie_break) {
  require_bidders(instance, feasibility);
  const auto schedules = ironed_schedules(instance, alpha);
  PointwiseCache cache(feasibility, tie_break);
  AuctionTable table(instance.bidders(), instance.profiles().size());
  for (ProfileIndex q = 0; q < instance.profiles().size(); ++q) {
    const auto& solution = cache.at(ironed_at(instance, schedules, q));
    for (std::size_t i = 0; i < instance.bidders(); ++i) {
      table.set_allocation(i, q, solution.allocation[i]);
    }
  }
  apply_payment_rule(instance, table);
  return table;
}

// ---------------------------------------------------------------------------
// Certificates

KktCertificate assemble_certificate(const Instance& instance,
                                    const Rational& alpha,
                                    const FeasibilitySpec& feasibility,
                                    const TieBreakRule& tie_break) {
  require_bidders(instance, feasibility);
  const auto schedules = ironed_schedules(instance, alpha);
  const ProfileSpace& space = instance.profiles();
  KktCertificate cert;
  cert.shape = CertificateShape::kDsic;
  cert.alpha = alpha;
  cert.tau.assign(instance.bidders(),
                  std::vector<Rational>(space.size(), Rational(0)));
  for (std::size_t i = 0; i < instance.bidders(); ++i) {
    for (ProfileIndex q = 0; q < space.size(); ++q) {
      cert.tau[i][q] = instance.opponents_probability(i, q) *
                       schedules[i].certificate.tau[space.coordinate(q, i)];
    }
  }
  PointwiseCache cache(feasibility, tie_break);
  cert.psi.resize(space.size());
  for (ProfileIndex q = 0; q < space.size(); ++q) {
    const auto& solution = cache.at(ironed_at(instance, schedules, q));
    for (const Rational& y : solution.multipliers) {
      cert.psi[q].push_back(instance.probability(q) * y);
    }
  }
  return cert;
}

KktCertificate certificate_from_lp(const Instance& instance,
                                   const AuctionLp& lp,
                                   const LpSolution& solution) {
  if (lp.kind != LpKind::kLp2 && lp.kind != LpKind::kBlp2) {
    throw PreconditionError("certificates transfer from LP2 or BLP2 only");
  }
  if (solution.status != LpStatus::kOptimal) {
    throw PreconditionError("certificate transfer needs an optimal solution");
  }
  const ProfileSpace& space = instance.profiles();
  const std::size_t n = instance.bidders();
  const bool dsic = lp.kind == LpKind::kLp2;
  KktCertificate cert;
  cert.shape = dsic ? CertificateShape::kDsic : CertificateShape::kBic;
  cert.alpha = 1;
  cert.tau.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    cert.tau[i].assign(dsic ? space.size() : instance.prior(i).size(),
                       Rational(0));
  }
  // FeasibilitySpec::simplex order: nonneg_0..nonneg_{n-1}, supply.
  cert.psi.assign(space.size(), std::vector<Rational>(n + 1, Rational(0)));
  for (std::size_t r = 0; r < lp.roles.size(); ++r) {
    const RowTag& tag = lp.roles[r];
    const Rational& y = solution.dual[r];
    if (tag.role == RowRole::kFeasibility) {
      cert.psi[*tag.profile][n] = y;
      continue;
    }
    if (tag.role != RowRole::kMonotonicity) continue;
    const std::size_t i = tag.bidder;
    if (tag.k > 0) {
      if (dsic) {
        cert.tau[i][space.with_coordinate(*tag.profile, i, tag.k)] = y;
      } else {
        cert.tau[i][tag.k] = y;
      }
      continue;
    }
    // The k = 0 row is non-negativity of a_i(0, .), which lives in G.
    if (dsic) {
      cert.psi[*tag.profile][i] += y;
    } else {
      for (ProfileIndex base : space.column_bases(i)) {
        cert.psi[base][i] += instance.opponents_probability(i, base) * y;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (ProfileIndex q = 0; q < space.size(); ++q) {
      cert.psi[q][i] -= solution.reduced_costs[lp.layout.allocation(i, q)];
    }
  }
  return cert;
}

namespace {

void require_tau_shape(const KktCertificate& cert, const Instance& instance,
                       CertificateShape shape) {
  if (cert.shape != shape) {
    throw StructuralError("certificate has the wrong shape for this conversion");
  }
  if (cert.tau.size() != instance.bidders()) {
    throw StructuralError("certificate tau has the wrong bidder count");
  }
  for (std::size_t i = 0; i < instance.bidders(); ++i) {
    const std::size_t expected = shape == CertificateShape::kDsic
                                     ? instance.profiles().size()
                                     : instance.prior(i).size();
    if (cert.tau[i].size() != expected) {
      throw StructuralError("certificate tau of bidder " + std::to_string(i) +
                            " has " + std::to_string(cert.tau[i].size()) +
                            " entries, expected " + std::to_string(expected));
    }
  }
}

}  // namespace

KktCertificate dsic_to_bic_certificate(const KktCertificate& certificate,
                                       const Instance& instance) {
  require_tau_shape(certificate, instance, CertificateShape::kDsic);
  const ProfileSpace& space = instance.profiles();
  KktCertificate out;
  out.shape = CertificateShape::kBic;
  out.alpha = certificate.alpha;
  out.psi = certificate.psi;
  out.tau.resize(instance.bidders());
  for (std::size_t i = 0; i < instance.bidders(); ++i) {
    const std::size_t K = instance.prior(i).size();
    out.tau[i].assign(K, Rational(0));
    const auto bases = space.column_bases(i);
    for (std::size_t k = 0; k < K; ++k) {
      bool first = true;
      for (ProfileIndex base : bases) {
        const ProfileIndex q = space.with_coordinate(base, i, k);
        const Rational scaled =
            certificate.tau[i][q] / instance.opponents_probability(i, base);
        if (first) {
          out.tau[i][k] = scaled;
          first = false;
        } else if (scaled != out.tau[i][k]) {
          throw CertificationError(
              "tau of bidder " + std::to_string(i) + " at k=" +
              std::to_string(k) + " is not proportional to f_{-i}: " +
              to_string(scaled) + " at opponents " +
              space.format_opponents(q, i) + ", " + to_string(out.tau[i][k]) +
              " before");
        }
      }
    }
  }
  return out;
}

KktCertificate bic_to_dsic_certificate(const KktCertificate& certificate,
                                       const Instance& instance) {
  require_tau_shape(certificate, instance, CertificateShape::kBic);
  const ProfileSpace& space = instance.profiles();
  KktCertificate out;
  out.shape = CertificateShape::kDsic;
  out.alpha = certificate.alpha;
  out.psi = certificate.psi;
  out.tau.resize(instance.bidders());
  for (std::size_t i = 0; i < instance.bidders(); ++i) {
    out.tau[i].resize(space.size());
    for (ProfileIndex q = 0; q < space.size(); ++q) {
      out.tau[i][q] = instance.opponents_probability(i, q) *
                      certificate.tau[i][space.coordinate(q, i)];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Verification

std::string_view to_string(KktLine line) {
  switch (line) {
    case KktLine::kPaymentRule: return "p = Ca";
    case KktLine::kMonotonicity: return "Ma <= 0";
    case KktLine::kFeasibility: return "G(a) <= 0";
    case KktLine::kStationarity: return "grad G(a)^T psi = f phi^alpha - M^T tau";
    case KktLine::kDualFeasibility: return "tau, psi >= 0";
    case KktLine::kMonotonicitySlackness: return "(Ma)^T tau = 0";
    case KktLine::kFeasibilitySlackness: return "G(a)^T psi = 0";
  }
  return "?";
}

namespace {

class KktChecker {
 public:
  KktChecker(const Instance& instance, const Rational& alpha,
             const FeasibilitySpec& feasibility, const AuctionTable& table,
             const KktCertificate& cert, const KktOptions& options)
      : instance_(instance),
        space_(instance.profiles()),
        feasibility_(feasibility),
        table_(table),
        cert_(cert),
        options_(options),
        dsic_(cert.shape == CertificateShape::kDsic) {
    validate_alpha(alpha);
    table.require_complete(instance);
    require_bidders(instance, feasibility);
    if (cert.alpha != alpha) {
      throw StructuralError("certificate alpha " + to_string(cert.alpha) +
                            " differs from " + to_string(alpha));
    }
    require_tau_shape(cert, instance, cert.shape);
    if (cert.psi.size() != space_.size()) {
      throw StructuralError("certificate psi has " +
                            std::to_string(cert.psi.size()) + " profiles, expected " +
                            std::to_string(space_.size()));
    }
    for (const auto& row : cert.psi) {
      if (row.size() != feasibility.size()) {
        throw StructuralError("certificate psi has " + std::to_string(row.size()) +
                              " multipliers per profile, expected " +
                              std::to_string(feasibility.size()));
      }
    }
    for (const auto& prior : instance.priors()) {
      phi_.push_back(generalized_virtual_values(prior, alpha));
    }
    if (!dsic_) interim_ = interim(instance, table);
  }

  KktReport run() {
    payment_rule();
    monotonicity();
    feasibility();
    stationarity();
    dual_feasibility();
    return std::move(report_);
  }

 private:
  void fail(KktLine line, std::string detail) {
    report_.violations.push_back({line, std::move(detail)});
  }
  std::string at(std::size_t i, ProfileIndex q) const {
    return "bidder " + std::to_string(i) + " at " + space_.format(q);
  }
  std::vector<Rational> allocation(ProfileIndex q) const {
    std::vector<Rational> a(instance_.bidders());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = table_.allocation(i, q);
    return a;
  }
  static std::vector<double> approximate(const std::vector<Rational>& a) {
    std::vector<double> out;
    for (const auto& x : a) out.push_back(to_double(x));
    return out;
  }

  void payment_rule() {
    for (std::size_t i = 0; i < instance_.bidders(); ++i) {
      const auto& prior = instance_.prior(i);
      for (ProfileIndex base : space_.column_bases(i)) {
        Rational lower_sum = 0;
        for (std::size_t k = 0; k < prior.size(); ++k) {
          const ProfileIndex q = space_.with_coordinate(base, i, k);
          const Rational& a = table_.allocation(i, q);
          const Rational expected = prior.value(k) * a - lower_sum;
          if (table_.payment(i, q) != expected) {
            fail(KktLine::kPaymentRule,
                 at(i, q) + ": payment " + to_string(table_.payment(i, q)) +
                     ", Ca gives " + to_string(expected));
          }
          lower_sum += (k + 1 < prior.size()
                            ? Rational(prior.value(k + 1) - prior.value(k))
                            : Rational(0)) *
                       a;
        }
      }
    }
  }

  // Monotonicity rows and their slackness against tau.
  void monotonicity() {
    for (std::size_t i = 0; i < instance_.bidders(); ++i) {
      const std::size_t K = instance_.prior(i).size();
      if (dsic_) {
        for (ProfileIndex base : space_.column_bases(i)) {
          for (std::size_t k = 1; k < K; ++k) {
            const ProfileIndex q = space_.with_coordinate(base, i, k);
            const Rational gap = table_.allocation(i, q) -
                                 table_.allocation(
                                     i, space_.with_coordinate(base, i, k - 1));
            check_row(gap, cert_.tau[i][q], at(i, q));
          }
        }
      } else {
        for (std::size_t k = 1; k < K; ++k) {
          check_row(interim_.allocation[i][k] - interim_.allocation[i][k - 1],
                    cert_.tau[i][k],
                    "bidder " + std::to_string(i) + " interim k=" +
                        std::to_string(k));
        }
      }
    }
  }

  void check_row(const Rational& gap, const Rational& tau,
                 const std::string& where) {
    if (sgn(gap) < 0) {
      fail(KktLine::kMonotonicity,
           where + ": allocation drops by " + to_string(-gap));
    }
    if (sgn(tau) > 0 && sgn(gap) != 0) {
      fail(KktLine::kMonotonicitySlackness,
           where + ": tau " + to_string(tau) + " on a slack row (gap " +
               to_string(gap) + ")");
    }
  }

  void feasibility() {
    for (ProfileIndex q = 0; q < space_.size(); ++q) {
      const auto a = allocation(q);
      for (std::size_t j = 0; j < feasibility_.size(); ++j) {
        const Rational& psi = cert_.psi[q][j];
        const auto& c = feasibility_.constraints()[j];
        if (const auto* lin = std::get_if<LinearConstraint>(&c)) {
          Rational g = -lin->rhs;
          for (std::size_t i = 0; i < a.size(); ++i) {
            g += lin->coefficients[i] * a[i];
          }
          if (sgn(g) > 0) {
            fail(KktLine::kFeasibility, lin->label + " at " + space_.format(q) +
                                            " exceeded by " + to_string(g));
          }
          if (sgn(psi) > 0 && sgn(g) != 0) {
            fail(KktLine::kFeasibilitySlackness,
                 lin->label + " at " + space_.format(q) + ": psi " +
                     to_string(psi) + " on a slack constraint");
          }
        } else {
          const auto& smooth = std::get<SmoothConstraint>(c);
          const double g = smooth.value(approximate(a));
          if (g > options_.smooth_tolerance) {
            fail(KktLine::kFeasibility, smooth.name + " at " + space_.format(q) +
                                            " exceeded by " + std::to_string(g));
          }
          if (sgn(psi) > 0 && std::abs(g) > options_.smooth_tolerance) {
            fail(KktLine::kFeasibilitySlackness,
                 smooth.name + " at " + space_.format(q) + ": psi " +
                     to_string(psi) + " on a slack constraint");
          }
        }
      }
    }
  }

  // (M^T tau) at a_i(q).
  Rational mt_tau(std::size_t i, ProfileIndex q) const {
    const std::size_t k = space_.coordinate(q, i);
    const std::size_t K = instance_.prior(i).size();
    Rational total = 0;
    if (dsic_) {
      if (k + 1 < K) total += cert_.tau[i][space_.with_coordinate(q, i, k + 1)];
      if (k > 0) total -= cert_.tau[i][q];
    } else {
      if (k + 1 < K) total += cert_.tau[i][k + 1];
      if (k > 0) total -= cert_.tau[i][k];
      total *= instance_.opponents_probability(i, q);
    }
    return total;
  }

  void stationarity() {
    for (ProfileIndex q = 0; q < space_.size(); ++q) {
      const auto a = allocation(q);
      std::vector<double> smooth_part(a.size(), 0.0);
      bool has_smooth = false;
      std::vector<Rational> linear_part(a.size(), Rational(0));
      for (std::size_t j = 0; j < feasibility_.size(); ++j) {
        const Rational& psi = cert_.psi[q][j];
        if (sgn(psi) == 0) continue;
        const auto& c = feasibility_.constraints()[j];
        if (const auto* lin = std::get_if<LinearConstraint>(&c)) {
          for (std::size_t i = 0; i < a.size(); ++i) {
            linear_part[i] += psi * lin->coefficients[i];
          }
        } else {
          has_smooth = true;
          const auto grad =
              std::get<SmoothConstraint>(c).gradient(approximate(a));
          for (std::size_t i = 0; i < a.size(); ++i) {
            smooth_part[i] += to_double(psi) * grad.at(i);
          }
        }
      }
      for (std::size_t i = 0; i < a.size(); ++i) {
        const Rational rhs =
            instance_.probability(q) * phi_[i][space_.coordinate(q, i)] -
            mt_tau(i, q);
        if (has_smooth) {
          const double lhs = to_double(linear_part[i]) + smooth_part[i];
          if (std::abs(lhs - to_double(rhs)) > options_.smooth_tolerance) {
            fail(KktLine::kStationarity, at(i, q) + ": " + std::to_string(lhs) +
                                             " vs " + to_decimal(rhs, 12));
          }
        } else if (linear_part[i] != rhs) {
          fail(KktLine::kStationarity, at(i, q) + ": " +
                                           to_string(linear_part[i]) + " vs " +
                                           to_string(rhs));
        }
      }
    }
  }

  void dual_feasibility() {
    for (std::size_t i = 0; i < cert_.tau.size(); ++i) {
      for (std::size_t e = 0; e < cert_.tau[i].size(); ++e) {
        const Rational& tau = cert_.tau[i][e];
        const std::size_t k = dsic_ ? space_.coordinate(e, i) : e;
        const std::string where =
            "tau of bidder " + std::to_string(i) +
            (dsic_ ? " at " + space_.format(e) : " at k=" + std::to_string(e));
        if (sgn(tau) < 0) {
          fail(KktLine::kDualFeasibility, where + " is " + to_string(tau));
        } else if (k == 0 && sgn(tau) != 0) {
          fail(KktLine::kDualFeasibility,
               where + " has no monotonicity row but is " + to_string(tau));
        }
      }
    }
    for (ProfileIndex q = 0; q < cert_.psi.size(); ++q) {
      for (std::size_t j = 0; j < cert_.psi[q].size(); ++j) {
        if (sgn(cert_.psi[q][j]) < 0) {
          fail(KktLine::kDualFeasibility,
               "psi " + std::to_string(j) + " at " + space_.format(q) + " is " +
                   to_string(cert_.psi[q][j]));
        }
      }
    }
  }

  const Instance& instance_;
  const ProfileSpace& space_;
  const FeasibilitySpec& feasibility_;
  const AuctionTable& table_;
  const KktCertificate& cert_;
  const KktOptions& options_;
  const bool dsic_;
  std::vector<std::vector<Rational>> phi_;
  InterimTable interim_;
  KktReport report_;
};

}  // namespace

KktReport verify_kkt(const Instance& instance, const Rational& alpha,
                     const FeasibilitySpec& feasibility,
                     const AuctionTable& table, const KktCertificate& certificate,
                     const KktOptions& options) {
  return KktChecker(instance, alpha, feasibility, table, certificate, options)
      .run();
}

}  // namespace optauction
