#pragma once

// Exact rational linear programming: a two-phase primal simplex over GMP
// rationals with Bland's rule (optionally Dantzig pricing that falls back to
// Bland on degenerate pivots). Every optimal solution is returned with a
// complementary dual and is checked for zero duality gap before returning.
//
// Dual sign convention, with s = +1 for max and -1 for min:
//   c = A^T y + d,   s*y >= 0 on <= rows,  s*y <= 0 on >= rows,
//   s*d > 0 only at a finite upper bound, s*d < 0 only at a finite lower one.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "optauction/rational.hpp"

namespace optauction {

enum class Sense { kMaximize, kMinimize };
enum class Relation { kLessEqual, kEqual, kGreaterEqual };

std::string_view to_string(Relation relation);

struct Bound {
  std::optional<Rational> lower;
  std::optional<Rational> upper;

  static Bound free() { return {}; }
  static Bound nonnegative() { return {Rational(0), std::nullopt}; }
  static Bound between(Rational lo, Rational hi) {
    return {std::move(lo), std::move(hi)};
  }
  bool operator==(const Bound&) const = default;
};

struct Term {
  std::size_t variable;
  Rational coefficient;
  bool operator==(const Term&) const = default;
};

struct LpRow {
  std::string label;
  // Sorted by variable, no duplicates, no zero coefficients.
  std::vector<Term> terms;
  Relation relation;
  Rational rhs;
};

class LpProgram {
 public:
  explicit LpProgram(Sense sense = Sense::kMaximize) : sense_(sense) {}

  // Labels must be unique within variables and within rows
  // (StructuralError otherwise). Returns the new index.
  std::size_t add_variable(std::string label, Rational objective = 0,
                           Bound bound = Bound::free());
  // Terms may be unsorted and repeat a variable; they are merged.
  std::size_t add_row(std::string label, std::vector<Term> terms,
                      Relation relation, Rational rhs);
  void set_objective(std::size_t variable, Rational coefficient);

  Sense sense() const { return sense_; }
  std::size_t variables() const { return objective_.size(); }
  std::size_t row_count() const { return rows_.size(); }
  const std::vector<LpRow>& rows() const { return rows_; }
  const LpRow& row(std::size_t r) const { return rows_.at(r); }
  const std::vector<Rational>& objective() const { return objective_; }
  const std::vector<Bound>& bounds() const { return bounds_; }
  const std::vector<std::string>& variable_labels() const { return labels_; }
  std::vector<Rational> dense_row(std::size_t r) const;

  // Re-checks every invariant; StructuralError on the first failure.
  void validate() const;

  Rational activity(std::size_t r, std::span<const Rational> x) const;
  Rational objective_value(std::span<const Rational> x) const;

 private:
  Sense sense_;
  std::vector<Rational> objective_;
  std::vector<Bound> bounds_;
  std::vector<std::string> labels_;
  std::vector<LpRow> rows_;
  std::unordered_set<std::string> variable_names_;
  std::unordered_set<std::string> row_names_;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };
std::string_view to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  Rational optimum;
  std::vector<Rational> primal;
  std::vector<Rational> dual;           // one per row
  std::vector<Rational> reduced_costs;  // c - A^T y, one per variable
  std::size_t iterations = 0;
};

enum class PivotRule { kBland, kDantzigWithBlandFallback };

struct SolveOptions {
  PivotRule rule = PivotRule::kBland;
  // Safety net against solver bugs; exceeding it throws InvariantError.
  std::size_t iteration_limit = 5'000'000;
};

LpSolution solve(const LpProgram& program, const SolveOptions& options = {});

// b^T y plus the bound terms selected by the reduced-cost signs.
Rational dual_objective(const LpProgram& program, const LpSolution& solution);

struct CsViolation {
  enum class Kind { kRow, kVariable };
  Kind kind;
  std::size_t index;
  std::string label;
  Rational multiplier;  // dual (row) or reduced cost (variable)
  Rational slack;       // row slack, or distance to the implied bound
};

// Rows with a nonzero dual must bind; variables with a nonzero reduced cost
// must sit at the bound that sign selects. PreconditionError unless optimal.
std::vector<CsViolation> check_complementary_slackness(
    const LpProgram& program, const LpSolution& solution);

// CPLEX LP text. Each row (and the objective) is scaled by the lcm of its
// denominators so every coefficient is an integer.
void write_lp_format(const LpProgram& program, std::ostream& out);

}  // namespace optauction
