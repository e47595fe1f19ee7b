#pragma once

// Allocation constraint matrices, a total-unimodularity checker by
// subdeterminant enumeration, and a sampled falsifier for total dual
// integrality.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "optauction/core_model.hpp"
#include "optauction/rational.hpp"

namespace optauction {

enum class MatrixRowKind { kMonotonicity, kFeasibility, kCustom };

struct ConstraintMatrix {
  std::vector<std::vector<std::int64_t>> entries;
  std::vector<std::int64_t> rhs;
  std::vector<MatrixRowKind> row_kinds;
  std::vector<std::string> column_labels;

  std::size_t rows() const { return entries.size(); }
  std::size_t columns() const { return column_labels.size(); }
};

// Monotonicity rows a_i(k-1) - a_i(k) <= 0 for k >= 1, one block per bidder
// and opponents' profile, then one feasibility row sum_i a_i(k) <= 1 per
// profile. The k = 0 non-negativity rows are not included. Columns are
// ordered player-major like the LP variable layout.
ConstraintMatrix build_allocation_matrix(const Instance& instance);

// CSV with a header row "kind,rhs,<column labels>".
void write_csv(const ConstraintMatrix& matrix, std::ostream& out);

struct TuWitness {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> columns;
  mpz_class determinant;
};

struct TuVerdict {
  bool totally_unimodular = true;
  // False when only a random sample of square submatrices was examined; a
  // true verdict is then "no violation found".
  bool exhaustive = true;
  std::optional<TuWitness> witness;
  std::uint64_t submatrices_checked = 0;
};

struct TuOptions {
  // Exhaustive enumeration when the number of square submatrices,
  // C(rows + columns, rows) - 1, stays within this budget. The default is
  // the count of a 12 x 12 matrix.
  std::uint64_t exhaustive_budget = 2'704'156;
  std::uint64_t samples = 200'000;
  std::uint64_t seed = 0x5eed;
};

TuVerdict is_totally_unimodular(const ConstraintMatrix& matrix,
                                const TuOptions& options = {});
TuVerdict is_totally_unimodular(
    const std::vector<std::vector<std::int64_t>>& entries,
    const TuOptions& options = {});

// Exact determinant of the submatrix picked by `rows` x `columns`.
mpz_class subdeterminant(const std::vector<std::vector<std::int64_t>>& entries,
                         const std::vector<std::size_t>& rows,
                         const std::vector<std::size_t>& columns);

// The system G x <= b.
struct TdiSystem {
  std::vector<std::vector<Rational>> G;
  std::vector<Rational> b;

  std::size_t rows() const { return G.size(); }
  std::size_t variables() const { return G.empty() ? 0 : G.front().size(); }
};

// The allocation system of a matrix; with `nonnegativity` the rows
// -a_j <= 0 are prepended.
TdiSystem tdi_system_from(const ConstraintMatrix& matrix, bool nonnegativity);

struct TdiOptions {
  std::size_t samples = 50;
  // Integral psi candidates are searched in [0, psi_bound]^m.
  std::int64_t psi_bound = 4;
  // Sampled objective entries are drawn from [-c_range, c_range].
  std::int64_t c_range = 3;
  std::uint64_t seed = 0x5eed;
  // Objectives tried before the random ones.
  std::vector<std::vector<std::int64_t>> objectives;
};

struct TdiVerdict {
  enum class Kind { kNoCounterexampleFound, kCounterexample };
  Kind kind = Kind::kNoCounterexampleFound;
  // For a counterexample: the objective, the attained minimum and one
  // (fractional) optimal psi. "Counterexample" means no integral optimal
  // psi exists with entries up to psi_bound.
  std::vector<std::int64_t> c;
  Rational minimum;
  std::vector<Rational> psi;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;  // min not attained (infeasible or unbounded)
};

// For each objective c solves min b^T psi s.t. G^T psi = c, psi >= 0
// exactly and looks for an integral optimal psi: the returned vertex if it
// is integral, otherwise by enumeration up to psi_bound. PreconditionError for
// systems with more than 8 variables or 12 rows, or inconsistent shapes.
TdiVerdict tdi_falsify(const TdiSystem& system, const TdiOptions& options = {});

}  // namespace optauction
