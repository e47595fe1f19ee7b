#include "optauction/auction_lp.hpp"

#include <string>

#include "optauction/error.hpp"
#include "optauction/virtuals.hpp"

namespace optauction {

std::string_view to_string(LpKind kind) {
  switch (kind) {
    case LpKind::kLp1: return "LP1";
    case LpKind::kBlp1: return "BLP1";
    case LpKind::kLp2: return "LP2";
    case LpKind::kBlp2: return "BLP2";
  }
  return "?";
}

std::string_view to_string(PositivitySource source) {
  switch (source) {
    case PositivitySource::kFirstSolve: return "first-solve";
    case PositivitySource::kAlternatePivotRule: return "alternate-pivot-rule";
    case PositivitySource::kTopBorderFixed: return "top-border-fixed";
  }
  return "?";
}

namespace {

class Builder {
 public:
  Builder(LpKind kind, const Instance& instance, const BuildOptions& options)
      : instance_(instance),
        space_(instance.profiles()),
        options_(options),
        lp_{kind, LpProgram(Sense::kMaximize), {},
            {instance.bidders(), instance.profiles().size()}} {
    const std::size_t cells = instance.bidders() * space_.size();
    if (cells > options.variable_cap) {
      throw SizeGuardError(std::string(to_string(kind)) + ": " +
                           std::to_string(cells) +
                           " allocation variables exceed the cap of " +
                           std::to_string(options.variable_cap));
    }
  }

  AuctionLp build() {
    const LpKind kind = lp_.kind;
    const bool revenue = kind == LpKind::kLp1 || kind == LpKind::kBlp1;
    const bool interim = kind == LpKind::kBlp1 || kind == LpKind::kBlp2;
    add_variables(revenue);
    if (revenue) {
      truthfulness_rows(RowRole::kDown, interim);
      truthfulness_rows(RowRole::kUp, interim);
    } else {
      payment_rows();
    }
    monotonicity_rows(interim);
    feasibility_rows();
    return std::move(lp_);
  }

 private:
  std::size_t a(std::size_t i, ProfileIndex base, std::size_t k) const {
    return lp_.layout.allocation(i, space_.with_coordinate(base, i, k));
  }
  std::size_t p(std::size_t i, ProfileIndex base, std::size_t k) const {
    return lp_.layout.payment(i, space_.with_coordinate(base, i, k));
  }
  // ",(*,k2)" for n > 1; single-bidder labels carry no opponents so LP1
  // and BLP1 coincide exactly.
  std::string opponents(std::size_t i, ProfileIndex base) const {
    if (instance_.bidders() == 1) return "";
    return "," + space_.format_opponents(base, i);
  }

  void add_variables(bool revenue) {
    const std::size_t n = instance_.bidders();
    std::vector<std::vector<Rational>> phi;
    if (!revenue) {
      for (const auto& prior : instance_.priors()) {
        phi.push_back(virtual_values(prior));
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (ProfileIndex q = 0; q < space_.size(); ++q) {
        Rational c = revenue ? Rational(0)
                             : instance_.probability(q) *
                                   phi[i][space_.coordinate(q, i)];
        lp_.program.add_variable("a_" + std::to_string(i) + space_.format(q),
                                 std::move(c), Bound::nonnegative());
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (ProfileIndex q = 0; q < space_.size(); ++q) {
        lp_.program.add_variable("p_" + std::to_string(i) + space_.format(q),
                                 revenue ? instance_.probability(q)
                                         : Rational(0));
      }
    }
  }

  void add(std::string label, std::vector<Term> terms, Relation relation,
           Rational rhs, RowTag tag) {
    lp_.program.add_row(std::move(label), std::move(terms), relation,
                        std::move(rhs));
    lp_.roles.push_back(tag);
  }

  // weight * (u(k;k) - u(dev;k)) >= 0 in "<=" form; dev outside the support
  // is the abstain corner.
  void local_terms(std::vector<Term>& terms, std::size_t i, ProfileIndex base,
                   std::size_t k, std::ptrdiff_t dev,
                   const Rational& weight) const {
    const Rational& v = instance_.prior(i).value(k);
    terms.push_back({a(i, base, k), -weight * v});
    terms.push_back({p(i, base, k), weight});
    if (dev >= 0 && static_cast<std::size_t>(dev) < instance_.prior(i).size()) {
      const auto d = static_cast<std::size_t>(dev);
      terms.push_back({a(i, base, d), weight * v});
      terms.push_back({p(i, base, d), -weight});
    }
  }

  void truthfulness_rows(RowRole role, bool interim) {
    const bool down = role == RowRole::kDown;
    for (std::size_t i = 0; i < instance_.bidders(); ++i) {
      const std::size_t K = instance_.prior(i).size();
      const auto bases = space_.column_bases(i);
      for (std::size_t k = 0; k < K; ++k) {
        const bool top = !down && k + 1 == K;
        if (top && !options_.include_top_border) continue;
        const std::ptrdiff_t dev =
            static_cast<std::ptrdiff_t>(k) + (down ? -1 : 1);
        const std::string head = "lambda_" + std::to_string(i) + "(" +
                                 std::to_string(k) + "," +
                                 std::to_string(dev);
        if (interim) {
          std::vector<Term> terms;
          for (ProfileIndex base : bases) {
            local_terms(terms, i, base, k, dev,
                        instance_.opponents_probability(i, base));
          }
          add(head + ")", std::move(terms), Relation::kLessEqual, 0,
              {role, i, k, std::nullopt, top});
        } else {
          for (ProfileIndex base : bases) {
            std::vector<Term> terms;
            local_terms(terms, i, base, k, dev, Rational(1));
            add(head + opponents(i, base) + ")", std::move(terms),
                Relation::kLessEqual, 0, {role, i, k, base, top});
          }
        }
      }
    }
  }

  void monotonicity_rows(bool interim) {
    for (std::size_t i = 0; i < instance_.bidders(); ++i) {
      const auto bases = space_.column_bases(i);
      for (std::size_t k = 0; k < instance_.prior(i).size(); ++k) {
        const std::string head = "tau_" + std::to_string(i) + "(" +
                                 std::to_string(k) + "," +
                                 std::to_string(static_cast<long>(k) - 1);
        auto terms_for = [&](std::vector<Term>& terms, ProfileIndex base,
                             const Rational& w) {
          terms.push_back({a(i, base, k), -w});
          if (k > 0) terms.push_back({a(i, base, k - 1), w});
        };
        if (interim) {
          std::vector<Term> terms;
          for (ProfileIndex base : bases) {
            terms_for(terms, base, instance_.opponents_probability(i, base));
          }
          add(head + ")", std::move(terms), Relation::kLessEqual, 0,
              {RowRole::kMonotonicity, i, k, std::nullopt, false});
        } else {
          for (ProfileIndex base : bases) {
            std::vector<Term> terms;
            terms_for(terms, base, Rational(1));
            add(head + opponents(i, base) + ")", std::move(terms),
                Relation::kLessEqual, 0,
                {RowRole::kMonotonicity, i, k, base, false});
          }
        }
      }
    }
  }

  // p(k) - v_k a(k) + sum_{l<k} (v_{l+1} - v_l) a(l) = 0.
  void payment_rows() {
    for (std::size_t i = 0; i < instance_.bidders(); ++i) {
      const auto& prior = instance_.prior(i);
      for (ProfileIndex base : space_.column_bases(i)) {
        for (std::size_t k = 0; k < prior.size(); ++k) {
          std::vector<Term> terms{{p(i, base, k), Rational(1)},
                                  {a(i, base, k), -prior.value(k)}};
          for (std::size_t l = 0; l < k; ++l) {
            terms.push_back(
                {a(i, base, l), prior.value(l + 1) - prior.value(l)});
          }
          add("rho_" + std::to_string(i) + "(" + std::to_string(k) +
                  opponents(i, base) + ")",
              std::move(terms), Relation::kEqual, 0,
              {RowRole::kPayment, i, k, base, false});
        }
      }
    }
  }

  void feasibility_rows() {
    for (ProfileIndex q = 0; q < space_.size(); ++q) {
      std::vector<Term> terms;
      for (std::size_t i = 0; i < instance_.bidders(); ++i) {
        terms.push_back({lp_.layout.allocation(i, q), Rational(1)});
      }
      add("psi" + space_.format(q), std::move(terms), Relation::kLessEqual, 1,
          {RowRole::kFeasibility, 0, 0, q, false});
    }
  }

  const Instance& instance_;
  const ProfileSpace& space_;
  const BuildOptions& options_;
  AuctionLp lp_;
};

}  // namespace

AuctionLp build_auction_lp(LpKind kind, const Instance& instance,
                           const BuildOptions& options) {
  return Builder(kind, instance, options).build();
}

AuctionLp build_lp1(const Instance& instance, const BuildOptions& options) {
  return build_auction_lp(LpKind::kLp1, instance, options);
}
AuctionLp build_blp1(const Instance& instance, const BuildOptions& options) {
  return build_auction_lp(LpKind::kBlp1, instance, options);
}
AuctionLp build_lp2(const Instance& instance, const BuildOptions& options) {
  return build_auction_lp(LpKind::kLp2, instance, options);
}
AuctionLp build_blp2(const Instance& instance, const BuildOptions& options) {
  return build_auction_lp(LpKind::kBlp2, instance, options);
}

std::vector<std::size_t> rows_with_role(const AuctionLp& lp, RowRole role) {
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < lp.roles.size(); ++r) {
    if (lp.roles[r].role == role) rows.push_back(r);
  }
  return rows;
}

AuctionTable table_from_solution(const Instance& instance, const AuctionLp& lp,
                                 const LpSolution& solution) {
  if (solution.status != LpStatus::kOptimal) {
    throw PreconditionError("table_from_solution needs an optimal solution");
  }
  if (solution.primal.size() != lp.layout.size() ||
      lp.layout.profiles != instance.profiles().size() ||
      lp.layout.bidders != instance.bidders()) {
    throw StructuralError("solution does not match the instance layout");
  }
  AuctionTable table(instance.bidders(), instance.profiles().size());
  for (std::size_t i = 0; i < instance.bidders(); ++i) {
    for (ProfileIndex q = 0; q < instance.profiles().size(); ++q) {
      table.set(i, q, solution.primal[lp.layout.allocation(i, q)],
                solution.primal[lp.layout.payment(i, q)]);
    }
  }
  return table;
}

std::optional<std::string> downward_failure(const AuctionLp& lp,
                                            const LpSolution& solution) {
  for (std::size_t r : rows_with_role(lp, RowRole::kDown)) {
    const LpRow& row = lp.program.row(r);
    if (sgn(solution.dual[r]) <= 0) {
      return row.label + " has multiplier " + to_string(solution.dual[r]);
    }
    if (lp.program.activity(r, solution.primal) != row.rhs) {
      return row.label + " does not bind";
    }
  }
  return std::nullopt;
}

namespace {

bool upward_zero(const ProgramRun& run) {
  for (std::size_t r : rows_with_role(run.lp, RowRole::kUp)) {
    if (sgn(run.solution.dual[r]) != 0) return false;
  }
  return true;
}

ProgramRun run_program(LpKind kind, const Instance& instance,
                       const BuildOptions& build, const SolveOptions& opts) {
  AuctionLp lp = build_auction_lp(kind, instance, build);
  LpSolution solution = solve(lp.program, opts);
  if (solution.status != LpStatus::kOptimal) {
    throw CertificationError(std::string(to_string(kind)) + " is " +
                             std::string(to_string(solution.status)));
  }
  if (!check_complementary_slackness(lp.program, solution).empty()) {
    throw CertificationError(std::string(to_string(kind)) +
                             ": complementary slackness fails");
  }
  return {std::move(lp), std::move(solution)};
}

ProgramRun run_with_positivity(LpKind kind, const Instance& instance,
                               const ChainOptions& options,
                               PositivitySource& source) {
  ProgramRun run = run_program(kind, instance, options.build, options.solve);
  auto failure = downward_failure(run.lp, run.solution);
  if (!failure) {
    source = PositivitySource::kFirstSolve;
    return run;
  }
  SolveOptions other = options.solve;
  other.rule = other.rule == PivotRule::kBland
                   ? PivotRule::kDantzigWithBlandFallback
                   : PivotRule::kBland;
  run = run_program(kind, instance, options.build, other);
  if (!downward_failure(run.lp, run.solution)) {
    source = PositivitySource::kAlternatePivotRule;
    return run;
  }
  BuildOptions fixed = options.build;
  fixed.include_top_border = false;
  run = run_program(kind, instance, fixed, options.solve);
  if (!downward_failure(run.lp, run.solution)) {
    source = PositivitySource::kTopBorderFixed;
    return run;
  }
  throw CertificationError(std::string(to_string(kind)) +
                           ": downward positivity fails at " + *failure);
}

}  // namespace

ChainReport verify_chain(const Instance& instance,
                         const ChainOptions& options) {
  ChainReport report;
  report.lp1 = run_with_positivity(LpKind::kLp1, instance, options,
                                   report.lp1_positivity);
  report.blp1 = run_with_positivity(LpKind::kBlp1, instance, options,
                                    report.blp1_positivity);
  report.lp2 = run_program(LpKind::kLp2, instance, options.build, options.solve);
  report.blp2 =
      run_program(LpKind::kBlp2, instance, options.build, options.solve);
  report.lp1_upward_zero = upward_zero(report.lp1);
  report.blp1_upward_zero = upward_zero(report.blp1);

  const Rational& reference = report.lp1.solution.optimum;
  for (const ProgramRun* run : {&report.blp1, &report.lp2, &report.blp2}) {
    if (run->solution.optimum != reference) {
      throw CertificationError(
          "optimum(LP1) = " + to_string(reference) + " differs from optimum(" +
          std::string(to_string(run->lp.kind)) +
          ") = " + to_string(run->solution.optimum));
    }
  }
  return report;
}

}  // namespace optauction
