#pragma once

// Builders for the four revenue programs over a finite instance:
//
//   LP1   revenue, per-profile local DSIC rows, per-profile monotonicity
//   BLP1  revenue, interim local BIC rows, interim monotonicity
//   LP2   virtual welfare, per-profile payment identities and monotonicity
//   BLP2  virtual welfare, per-profile payment identities, interim
//         monotonicity
//
// plus the per-profile feasibility rows sum_i a_i(k) <= 1. All programs are
// maximizations whose inequality rows are written in "<=" form, so every
// truthfulness (lambda), monotonicity (tau) and feasibility (psi) multiplier
// the solver returns is non-negative. Payments are free; allocations carry
// an explicit a >= 0 bound. Per-profile programs also get a >= 0 from the
// k = 0 monotonicity row against the zero abstain corner, interim ones do
// not.

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "optauction/core_model.hpp"
#include "optauction/lp.hpp"

namespace optauction {

enum class LpKind { kLp1, kBlp1, kLp2, kBlp2 };
std::string_view to_string(LpKind kind);

enum class RowRole { kDown, kUp, kMonotonicity, kFeasibility, kPayment };

struct RowTag {
  RowRole role;
  std::size_t bidder = 0;  // unused for feasibility rows
  std::size_t k = 0;       // own value index (truthful type)
  // Column base for per-profile rows; empty for interim rows. For
  // feasibility rows this is the profile itself.
  std::optional<ProfileIndex> profile;
  // Up row of the top type, deviating into the abstain corner.
  bool top_border = false;
};

// Player-major: all of bidder 0's allocations over profiles, then bidder 1's,
// ..., then the payments in the same order.
struct VariableLayout {
  std::size_t bidders = 0;
  std::size_t profiles = 0;

  std::size_t allocation(std::size_t bidder, ProfileIndex profile) const {
    return bidder * profiles + profile;
  }
  std::size_t payment(std::size_t bidder, ProfileIndex profile) const {
    return (bidders + bidder) * profiles + profile;
  }
  std::size_t size() const { return 2 * bidders * profiles; }
};

struct AuctionLp {
  LpKind kind;
  LpProgram program;
  std::vector<RowTag> roles;  // parallel to program.rows()
  VariableLayout layout;
};

struct BuildOptions {
  // Refuse instances with n * prod_i K_i above this many allocation cells.
  std::size_t variable_cap = 2000;
  // Keep the top type's upward row (whose deviation is the abstain corner).
  // It is implied by the others; dropping it fixes its multiplier to zero.
  bool include_top_border = true;
};

AuctionLp build_lp1(const Instance& instance, const BuildOptions& options = {});
AuctionLp build_blp1(const Instance& instance, const BuildOptions& options = {});
AuctionLp build_lp2(const Instance& instance, const BuildOptions& options = {});
AuctionLp build_blp2(const Instance& instance, const BuildOptions& options = {});
AuctionLp build_auction_lp(LpKind kind, const Instance& instance,
                           const BuildOptions& options = {});

std::vector<std::size_t> rows_with_role(const AuctionLp& lp, RowRole role);

AuctionTable table_from_solution(const Instance& instance, const AuctionLp& lp,
                                 const LpSolution& solution);

// Which solve produced a dual with all downward multipliers positive.
enum class PositivitySource {
  kFirstSolve,
  // Same program, the other pivot rule.
  kAlternatePivotRule,
  // Top-border up rows dropped, i.e. their multipliers fixed to zero.
  kTopBorderFixed,
};
std::string_view to_string(PositivitySource source);

struct ProgramRun {
  AuctionLp lp;
  LpSolution solution;
};

struct ChainReport {
  ProgramRun lp1;
  ProgramRun blp1;
  ProgramRun lp2;
  ProgramRun blp2;
  PositivitySource lp1_positivity = PositivitySource::kFirstSolve;
  PositivitySource blp1_positivity = PositivitySource::kFirstSolve;
  // Recorded, not asserted: whether every upward multiplier came out zero.
  bool lp1_upward_zero = false;
  bool blp1_upward_zero = false;

  const Rational& optimum() const { return lp1.solution.optimum; }
};

struct ChainOptions {
  BuildOptions build;
  SolveOptions solve;
};

// Solves all four programs and certifies: equal optima; every downward
// multiplier of LP1 and BLP1 is strictly positive; every downward row binds
// at both optima. Throws CertificationError naming the failed relation.
ChainReport verify_chain(const Instance& instance,
                         const ChainOptions& options = {});

// Downward-positivity and binding check on one solved LP1/BLP1. Returns the
// label of the first offending row, or empty if the relation holds.
std::optional<std::string> downward_failure(const AuctionLp& lp,
                                            const LpSolution& solution);

}  // namespace optauction
