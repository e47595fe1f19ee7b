#include "optauction/polyhedral.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

#include "optauction/error.hpp"
#include "optauction/lp.hpp"

namespace optauction {

namespace {
__extension__ typedef __int128 Int128;
__extension__ typedef unsigned __int128 UInt128;
}  // namespace

ConstraintMatrix build_allocation_matrix(const Instance& instance) {
  const ProfileSpace& space = instance.profiles();
  const std::size_t n = instance.bidders();
  const std::size_t P = space.size();
  ConstraintMatrix m;
  for (std::size_t i = 0; i < n; ++i) {
    for (ProfileIndex q = 0; q < P; ++q) {
      m.column_labels.push_back("a_" + std::to_string(i) + space.format(q));
    }
  }
  auto column = [P](std::size_t i, ProfileIndex q) { return i * P + q; };
  for (std::size_t i = 0; i < n; ++i) {
    for (ProfileIndex base : space.column_bases(i)) {
      for (std::size_t k = 1; k < instance.prior(i).size(); ++k) {
        std::vector<std::int64_t> row(n * P, 0);
        row[column(i, space.with_coordinate(base, i, k - 1))] = 1;
        row[column(i, space.with_coordinate(base, i, k))] = -1;
        m.entries.push_back(std::move(row));
        m.rhs.push_back(0);
        m.row_kinds.push_back(MatrixRowKind::kMonotonicity);
      }
    }
  }
  for (ProfileIndex q = 0; q < P; ++q) {
    std::vector<std::int64_t> row(n * P, 0);
    for (std::size_t i = 0; i < n; ++i) row[column(i, q)] = 1;
    m.entries.push_back(std::move(row));
    m.rhs.push_back(1);
    m.row_kinds.push_back(MatrixRowKind::kFeasibility);
  }
  return m;
}

namespace {

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

const char* kind_name(MatrixRowKind kind) {
  switch (kind) {
    case MatrixRowKind::kMonotonicity: return "monotonicity";
    case MatrixRowKind::kFeasibility: return "feasibility";
    case MatrixRowKind::kCustom: return "custom";
  }
  return "custom";
}

}  // namespace

void write_csv(const ConstraintMatrix& matrix, std::ostream& out) {
  out << "kind,rhs";
  for (const auto& label : matrix.column_labels) out << ',' << csv_field(label);
  out << '\n';
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    out << kind_name(r < matrix.row_kinds.size() ? matrix.row_kinds[r]
                                                 : MatrixRowKind::kCustom)
        << ',' << (r < matrix.rhs.size() ? matrix.rhs[r] : 0);
    for (std::int64_t v : matrix.entries[r]) out << ',' << v;
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Determinants

namespace {

// Fraction-free Gaussian elimination; every intermediate is a minor.
template <class T>
T bareiss(std::vector<T> a, std::size_t s) {
  T sign = 1;
  T previous = 1;
  for (std::size_t k = 0; k < s; ++k) {
    if (a[k * s + k] == 0) {
      std::size_t r = k + 1;
      while (r < s && a[r * s + k] == 0) ++r;
      if (r == s) return 0;
      for (std::size_t j = 0; j < s; ++j) std::swap(a[k * s + j], a[r * s + j]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < s; ++i) {
      for (std::size_t j = k + 1; j < s; ++j) {
        a[i * s + j] =
            (a[i * s + j] * a[k * s + k] - a[i * s + k] * a[k * s + j]) /
            previous;
      }
    }
    previous = a[k * s + k];
  }
  return sign * a[s * s - 1];
}

mpz_class to_mpz(Int128 v) {
  const bool negative = v < 0;
  UInt128 u = negative ? -static_cast<UInt128>(v) : static_cast<UInt128>(v);
  mpz_class result = static_cast<unsigned long>(u >> 64);
  result <<= 64;
  result += static_cast<unsigned long>(u & 0xffffffffffffffffULL);
  return negative ? mpz_class(-result) : result;
}

// Small matrices stay in Int128: with |entries| <= 1 the Hadamard bound
// keeps every product of two minors far inside its range for s <= 20.
mpz_class determinant(const std::vector<std::vector<std::int64_t>>& entries,
                      const std::vector<std::size_t>& rows,
                      const std::vector<std::size_t>& columns,
                      bool unit_entries) {
  const std::size_t s = rows.size();
  if (unit_entries && s <= 20) {
    std::vector<Int128> a(s * s);
    for (std::size_t i = 0; i < s; ++i) {
      for (std::size_t j = 0; j < s; ++j) {
        a[i * s + j] = entries[rows[i]][columns[j]];
      }
    }
    return to_mpz(bareiss(std::move(a), s));
  }
  std::vector<mpz_class> a(s * s);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      a[i * s + j] = static_cast<long>(entries[rows[i]][columns[j]]);
    }
  }
  return bareiss(std::move(a), s);
}

bool next_combination(std::vector<std::size_t>& pick, std::size_t n) {
  const std::size_t s = pick.size();
  for (std::size_t i = s; i-- > 0;) {
    if (pick[i] < n - s + i) {
      ++pick[i];
      for (std::size_t j = i + 1; j < s; ++j) pick[j] = pick[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// C(n, k), saturating at the uint64 maximum.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  k = std::min(k, n - k);
  UInt128 result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(result);
}

bool unit(const mpz_class& det) { return abs(det) <= 1; }

}  // namespace

mpz_class subdeterminant(const std::vector<std::vector<std::int64_t>>& entries,
                         const std::vector<std::size_t>& rows,
                         const std::vector<std::size_t>& columns) {
  if (rows.size() != columns.size()) {
    throw StructuralError("subdeterminant of a non-square selection");
  }
  for (std::size_t r : rows) {
    if (r >= entries.size()) throw StructuralError("row index out of range");
    for (std::size_t c : columns) {
      if (c >= entries[r].size()) {
        throw StructuralError("column index out of range");
      }
    }
  }
  if (rows.empty()) return 1;
  return determinant(entries, rows, columns, false);
}

TuVerdict is_totally_unimodular(const ConstraintMatrix& matrix,
                                const TuOptions& options) {
  return is_totally_unimodular(matrix.entries, options);
}

TuVerdict is_totally_unimodular(
    const std::vector<std::vector<std::int64_t>>& entries,
    const TuOptions& options) {
  TuVerdict verdict;
  const std::size_t r = entries.size();
  const std::size_t c = r == 0 ? 0 : entries.front().size();
  for (std::size_t i = 0; i < r; ++i) {
    if (entries[i].size() != c) throw StructuralError("ragged matrix");
    for (std::size_t j = 0; j < c; ++j) {
      if (entries[i][j] < -1 || entries[i][j] > 1) {
        verdict.totally_unimodular = false;
        verdict.witness =
            TuWitness{{i}, {j}, mpz_class(static_cast<long>(entries[i][j]))};
        return verdict;
      }
    }
  }
  if (r == 0 || c == 0) return verdict;

  auto test = [&](const std::vector<std::size_t>& rows,
                  const std::vector<std::size_t>& cols) {
    ++verdict.submatrices_checked;
    mpz_class det = determinant(entries, rows, cols, true);
    if (unit(det)) return true;
    verdict.totally_unimodular = false;
    verdict.witness = TuWitness{rows, cols, std::move(det)};
    return false;
  };

  const std::uint64_t total = binomial(r + c, r);
  verdict.exhaustive = total != UINT64_MAX && total - 1 <= options.exhaustive_budget;
  if (verdict.exhaustive) {
    for (std::size_t s = 1; s <= std::min(r, c); ++s) {
      std::vector<std::size_t> rows(s);
      std::iota(rows.begin(), rows.end(), std::size_t{0});
      do {
        std::vector<std::size_t> cols(s);
        std::iota(cols.begin(), cols.end(), std::size_t{0});
        do {
          if (!test(rows, cols)) return verdict;
        } while (next_combination(cols, c));
      } while (next_combination(rows, r));
    }
    return verdict;
  }

  std::mt19937_64 rng(options.seed);
  std::vector<std::size_t> all_rows(r), all_cols(c);
  std::iota(all_rows.begin(), all_rows.end(), std::size_t{0});
  std::iota(all_cols.begin(), all_cols.end(), std::size_t{0});
  std::uniform_int_distribution<std::size_t> size_dist(1, std::min(r, c));
  for (std::uint64_t t = 0; t < options.samples; ++t) {
    const std::size_t s = size_dist(rng);
    for (std::size_t i = 0; i < s; ++i) {
      std::swap(all_rows[i],
                all_rows[std::uniform_int_distribution<std::size_t>(i, r - 1)(rng)]);
      std::swap(all_cols[i],
                all_cols[std::uniform_int_distribution<std::size_t>(i, c - 1)(rng)]);
    }
    std::vector<std::size_t> rows(all_rows.begin(), all_rows.begin() + s);
    std::vector<std::size_t> cols(all_cols.begin(), all_cols.begin() + s);
    std::sort(rows.begin(), rows.end());
    std::sort(cols.begin(), cols.end());
    if (!test(rows, cols)) return verdict;
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// TDI

TdiSystem tdi_system_from(const ConstraintMatrix& matrix, bool nonnegativity) {
  TdiSystem system;
  const std::size_t c = matrix.columns();
  if (nonnegativity) {
    for (std::size_t j = 0; j < c; ++j) {
      std::vector<Rational> row(c, Rational(0));
      row[j] = -1;
      system.G.push_back(std::move(row));
      system.b.push_back(0);
    }
  }
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    std::vector<Rational> row(c);
    for (std::size_t j = 0; j < c; ++j) {
      row[j] = static_cast<long>(matrix.entries[r][j]);
    }
    system.G.push_back(std::move(row));
    system.b.push_back(static_cast<long>(matrix.rhs[r]));
  }
  return system;
}

namespace {

// Depth-first search for integral psi in [0, bound] over `active` indices
// with sum_j psi_j * target_row_j = target. Coordinates are the columns of
// G followed by the objective b.
class IntegralSearch {
 public:
  IntegralSearch(const std::vector<std::vector<Rational>>& vectors,
                 std::vector<std::size_t> active, std::int64_t bound)
      : vectors_(vectors), active_(std::move(active)), bound_(bound) {
    const std::size_t dims = vectors_.empty() ? 0 : vectors_.front().size();
    low_.assign(active_.size() + 1, std::vector<Rational>(dims, Rational(0)));
    high_ = low_;
    for (std::size_t pos = active_.size(); pos-- > 0;) {
      const auto& v = vectors_[active_[pos]];
      for (std::size_t t = 0; t < dims; ++t) {
        const Rational reach = v[t] * bound_;
        low_[pos][t] = low_[pos + 1][t] + (sgn(reach) < 0 ? reach : Rational(0));
        high_[pos][t] = high_[pos + 1][t] + (sgn(reach) > 0 ? reach : Rational(0));
      }
    }
  }

  bool find(std::vector<Rational> residual) {
    return step(0, residual);
  }

 private:
  bool step(std::size_t pos, std::vector<Rational>& residual) {
    for (std::size_t t = 0; t < residual.size(); ++t) {
      if (residual[t] < low_[pos][t] || residual[t] > high_[pos][t]) {
        return false;
      }
    }
    if (pos == active_.size()) return true;
    const auto& v = vectors_[active_[pos]];
    for (std::int64_t value = 0; value <= bound_; ++value) {
      if (value > 0) {
        for (std::size_t t = 0; t < residual.size(); ++t) residual[t] -= v[t];
      }
      if (step(pos + 1, residual)) return true;
    }
    for (std::size_t t = 0; t < residual.size(); ++t) {
      residual[t] += v[t] * bound_;
    }
    return false;
  }

  const std::vector<std::vector<Rational>>& vectors_;
  std::vector<std::size_t> active_;
  std::int64_t bound_;
  std::vector<std::vector<Rational>> low_;
  std::vector<std::vector<Rational>> high_;
};

}  // namespace

TdiVerdict tdi_falsify(const TdiSystem& system, const TdiOptions& options) {
  const std::size_t m = system.rows();
  const std::size_t n = system.variables();
  if (system.b.size() != m) {
    throw PreconditionError("TDI system: b has " + std::to_string(system.b.size()) +
                            " entries for " + std::to_string(m) + " rows");
  }
  for (const auto& row : system.G) {
    if (row.size() != n) throw PreconditionError("TDI system: ragged G");
  }
  if (n > 8 || m > 12) {
    throw PreconditionError("TDI falsifier is limited to 8 variables and 12 rows");
  }
  if (options.psi_bound < 0 || options.c_range < 0) {
    throw PreconditionError("TDI falsifier bounds must be non-negative");
  }

  // Row j of G extended by b_j: psi_j's contribution to (G^T psi, b^T psi).
  std::vector<std::vector<Rational>> vectors(m);
  for (std::size_t j = 0; j < m; ++j) {
    vectors[j] = system.G[j];
    vectors[j].push_back(system.b[j]);
  }

  std::vector<std::vector<std::int64_t>> objectives = options.objectives;
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::int64_t> entry(-options.c_range,
                                                    options.c_range);
  for (std::size_t s = 0; s < options.samples; ++s) {
    std::vector<std::int64_t> c(n);
    for (auto& v : c) v = entry(rng);
    objectives.push_back(std::move(c));
  }

  TdiVerdict verdict;
  for (const auto& c : objectives) {
    if (c.size() != n) throw PreconditionError("objective has the wrong length");
    LpProgram dual(Sense::kMinimize);
    for (std::size_t j = 0; j < m; ++j) {
      dual.add_variable("psi_" + std::to_string(j), system.b[j],
                        Bound::nonnegative());
    }
    for (std::size_t t = 0; t < n; ++t) {
      std::vector<Term> terms;
      for (std::size_t j = 0; j < m; ++j) terms.push_back({j, system.G[j][t]});
      dual.add_row("x_" + std::to_string(t), std::move(terms), Relation::kEqual,
                   static_cast<long>(c[t]));
    }
    const LpSolution solution = solve(dual);
    if (solution.status != LpStatus::kOptimal) {
      ++verdict.skipped;
      continue;
    }
    ++verdict.evaluated;
    if (std::all_of(solution.primal.begin(), solution.primal.end(),
                    [](const Rational& v) { return v.get_den() == 1; })) {
      continue;
    }
    // Any optimal psi is complementary to the returned dual, so a nonzero
    // reduced cost pins psi_j to zero.
    std::vector<std::size_t> active;
    for (std::size_t j = 0; j < m; ++j) {
      if (sgn(solution.reduced_costs[j]) == 0) active.push_back(j);
    }
    std::vector<Rational> target(n + 1);
    for (std::size_t t = 0; t < n; ++t) target[t] = static_cast<long>(c[t]);
    target[n] = solution.optimum;
    IntegralSearch search(vectors, std::move(active), options.psi_bound);
    if (!search.find(target)) {
      verdict.kind = TdiVerdict::Kind::kCounterexample;
      verdict.c = c;
      verdict.minimum = solution.optimum;
      verdict.psi = solution.primal;
      return verdict;
    }
  }
  return verdict;
}

}  // namespace optauction
