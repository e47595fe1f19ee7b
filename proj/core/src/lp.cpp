#include "optauction/lp.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <string>

#include "optauction/error.hpp"

namespace optauction {

std::string_view to_string(Relation relation) {
  switch (relation) {
    case Relation::kLessEqual: return "<=";
    case Relation::kEqual: return "=";
    case Relation::kGreaterEqual: return ">=";
  }
  return "?";
}

std::string_view to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// LpProgram

std::size_t LpProgram::add_variable(std::string label, Rational objective,
                                    Bound bound) {
  if (bound.lower && bound.upper && *bound.lower > *bound.upper) {
    throw StructuralError("variable " + label + " has lower bound above upper");
  }
  if (!variable_names_.insert(label).second) {
    throw StructuralError("duplicate variable label " + label);
  }
  objective_.push_back(std::move(objective));
  bounds_.push_back(std::move(bound));
  labels_.push_back(std::move(label));
  return objective_.size() - 1;
}

std::size_t LpProgram::add_row(std::string label, std::vector<Term> terms,
                               Relation relation, Rational rhs) {
  for (const Term& t : terms) {
    if (t.variable >= variables()) {
      throw StructuralError("row " + label + " references variable " +
                            std::to_string(t.variable) + " of " +
                            std::to_string(variables()));
    }
  }
  if (!row_names_.insert(label).second) {
    throw StructuralError("duplicate row label " + label);
  }
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    return a.variable < b.variable;
  });
  std::vector<Term> merged;
  merged.reserve(terms.size());
  for (Term& t : terms) {
    if (!merged.empty() && merged.back().variable == t.variable) {
      merged.back().coefficient += t.coefficient;
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [](const Term& t) { return sgn(t.coefficient) == 0; });
  rows_.push_back({std::move(label), std::move(merged), relation,
                   std::move(rhs)});
  return rows_.size() - 1;
}

void LpProgram::set_objective(std::size_t variable, Rational coefficient) {
  objective_.at(variable) = std::move(coefficient);
}

std::vector<Rational> LpProgram::dense_row(std::size_t r) const {
  std::vector<Rational> dense(variables(), Rational(0));
  for (const Term& t : rows_.at(r).terms) dense[t.variable] = t.coefficient;
  return dense;
}

void LpProgram::validate() const {
  if (bounds_.size() != objective_.size() ||
      labels_.size() != objective_.size()) {
    throw StructuralError("program variable arrays disagree in length");
  }
  std::unordered_set<std::string> seen;
  for (std::size_t j = 0; j < variables(); ++j) {
    if (!seen.insert(labels_[j]).second) {
      throw StructuralError("duplicate variable label " + labels_[j]);
    }
    const Bound& b = bounds_[j];
    if (b.lower && b.upper && *b.lower > *b.upper) {
      throw StructuralError("variable " + labels_[j] +
                            " has lower bound above upper");
    }
  }
  seen.clear();
  for (const LpRow& row : rows_) {
    if (!seen.insert(row.label).second) {
      throw StructuralError("duplicate row label " + row.label);
    }
    for (std::size_t t = 0; t < row.terms.size(); ++t) {
      if (row.terms[t].variable >= variables()) {
        throw StructuralError("row " + row.label + " is wider than the program");
      }
      if (t > 0 && row.terms[t].variable <= row.terms[t - 1].variable) {
        throw StructuralError("row " + row.label + " terms are not sorted");
      }
    }
  }
}

Rational LpProgram::activity(std::size_t r, std::span<const Rational> x) const {
  Rational total = 0;
  for (const Term& t : rows_.at(r).terms) total += t.coefficient * x[t.variable];
  return total;
}

Rational LpProgram::objective_value(std::span<const Rational> x) const {
  Rational total = 0;
  for (std::size_t j = 0; j < variables(); ++j) total += objective_[j] * x[j];
  return total;
}

// ---------------------------------------------------------------------------
// Simplex

namespace {

struct Tableau {
  std::size_t m = 0;
  std::size_t width = 0;
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> rhs;
  std::vector<std::size_t> basis;
  std::vector<std::ptrdiff_t> basic_row;
  std::vector<Rational> cost;
  std::vector<Rational> d;
  Rational z;
  std::vector<char> is_free;
  std::vector<char> artificial;
  std::vector<char> barred;
  std::vector<char> flipped;

  void pivot(std::size_t r, std::size_t q) {
    std::vector<Rational>& row = a[r];
    const Rational inverse = 1 / row[q];
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j < width; ++j) {
      if (sgn(row[j]) != 0) {
        row[j] *= inverse;
        support.push_back(j);
      }
    }
    rhs[r] *= inverse;
    Rational factor;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || sgn(a[i][q]) == 0) continue;
      factor = a[i][q];
      std::vector<Rational>& target = a[i];
      for (std::size_t j : support) target[j] -= factor * row[j];
      rhs[i] -= factor * rhs[r];
    }
    if (sgn(d[q]) != 0) {
      factor = d[q];
      for (std::size_t j : support) d[j] -= factor * row[j];
      z += factor * rhs[r];
    }
    basic_row[basis[r]] = -1;
    basis[r] = q;
    basic_row[q] = static_cast<std::ptrdiff_t>(r);
  }

  void flip(std::size_t q) {
    for (std::size_t i = 0; i < m; ++i) {
      if (sgn(a[i][q]) != 0) a[i][q] = -a[i][q];
    }
    d[q] = -d[q];
    cost[q] = -cost[q];
    flipped[q] = !flipped[q];
  }

  // Recomputes reduced costs and the objective value from `cost`.
  void price() {
    d = cost;
    z = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const Rational& cb = cost[basis[i]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j < width; ++j) {
        if (sgn(a[i][j]) != 0) d[j] -= cb * a[i][j];
      }
      z += cb * rhs[i];
    }
  }
};

enum class Outcome { kOptimal, kUnbounded };

Outcome run_simplex(Tableau& t, const SolveOptions& options,
                    std::size_t& iterations) {
  bool degenerate = false;
  for (;;) {
    const bool bland = options.rule == PivotRule::kBland || degenerate;
    std::optional<std::size_t> entering;
    for (std::size_t j = 0; j < t.width; ++j) {
      if (t.basic_row[j] >= 0 || t.barred[j]) continue;
      const int s = sgn(t.d[j]);
      if (s == 0 || (s < 0 && !t.is_free[j])) continue;
      if (bland) {
        entering = j;
        break;
      }
      if (!entering || abs(t.d[j]) > abs(t.d[*entering])) entering = j;
    }
    if (!entering) return Outcome::kOptimal;
    const std::size_t q = *entering;
    if (sgn(t.d[q]) < 0) t.flip(q);

    std::optional<std::size_t> leaving;
    Rational best;
    Rational ratio;
    for (std::size_t i = 0; i < t.m; ++i) {
      if (t.is_free[t.basis[i]] || sgn(t.a[i][q]) <= 0) continue;
      ratio = t.rhs[i] / t.a[i][q];
      if (!leaving || ratio < best ||
          (ratio == best && t.basis[i] < t.basis[*leaving])) {
        leaving = i;
        best = ratio;
      }
    }
    if (!leaving) return Outcome::kUnbounded;
    degenerate = sgn(best) == 0;
    t.pivot(*leaving, q);
    if (++iterations > options.iteration_limit) {
      throw InvariantError("simplex exceeded its iteration limit");
    }
  }
}

enum class Form { kShift, kReflect, kFree };

struct VariableMap {
  Form form;
  Rational offset;
};

int sense_sign(Sense sense) { return sense == Sense::kMaximize ? 1 : -1; }

// The bound value a nonzero reduced cost pins the variable to, if any.
const std::optional<Rational>& implied_bound(const Bound& bound,
                                             const Rational& reduced,
                                             Sense sense) {
  return sense_sign(sense) * sgn(reduced) > 0 ? bound.upper : bound.lower;
}

void certify(const LpProgram& program, const LpSolution& solution) {
  const int s = sense_sign(program.sense());
  for (std::size_t j = 0; j < program.variables(); ++j) {
    const Bound& b = program.bounds()[j];
    const Rational& x = solution.primal[j];
    if ((b.lower && x < *b.lower) || (b.upper && x > *b.upper)) {
      throw InvariantError("simplex returned a point outside the bounds of " +
                           program.variable_labels()[j]);
    }
    const Rational& dj = solution.reduced_costs[j];
    if (sgn(dj) != 0 && !implied_bound(b, dj, program.sense())) {
      throw InvariantError("simplex returned an infeasible dual at " +
                           program.variable_labels()[j]);
    }
  }
  for (std::size_t r = 0; r < program.row_count(); ++r) {
    const LpRow& row = program.row(r);
    const Rational lhs = program.activity(r, solution.primal);
    const Rational& y = solution.dual[r];
    bool primal_ok = true;
    bool dual_ok = true;
    switch (row.relation) {
      case Relation::kLessEqual:
        primal_ok = lhs <= row.rhs;
        dual_ok = s * sgn(y) >= 0;
        break;
      case Relation::kGreaterEqual:
        primal_ok = lhs >= row.rhs;
        dual_ok = s * sgn(y) <= 0;
        break;
      case Relation::kEqual:
        primal_ok = lhs == row.rhs;
        break;
    }
    if (!primal_ok) {
      throw InvariantError("simplex returned a point violating row " +
                           row.label);
    }
    if (!dual_ok) {
      throw InvariantError("simplex returned a wrong-signed dual on row " +
                           row.label);
    }
  }
  if (dual_objective(program, solution) != solution.optimum) {
    throw InvariantError("simplex returned a nonzero duality gap");
  }
}

}  // namespace

LpSolution solve(const LpProgram& program, const SolveOptions& options) {
  program.validate();
  const std::size_t n = program.variables();
  const int s = sense_sign(program.sense());

  // Map every variable to a column that is either free or >= 0.
  std::vector<VariableMap> maps(n);
  struct WorkRow {
    std::vector<Term> terms;  // over columns
    Relation relation;
    Rational rhs;
    int sign = 1;
  };
  std::vector<WorkRow> rows;
  rows.reserve(program.row_count());
  Rational constant = 0;
  std::vector<Rational> cost(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Bound& b = program.bounds()[j];
    const Rational c = s * program.objective()[j];
    if (b.lower) {
      maps[j] = {Form::kShift, *b.lower};
      cost[j] = c;
      constant += c * *b.lower;
    } else if (b.upper) {
      maps[j] = {Form::kReflect, *b.upper};
      cost[j] = -c;
      constant += c * *b.upper;
    } else {
      maps[j] = {Form::kFree, 0};
      cost[j] = c;
    }
  }
  for (const LpRow& row : program.rows()) {
    WorkRow w{{}, row.relation, row.rhs};
    w.terms.reserve(row.terms.size());
    for (const Term& t : row.terms) {
      const VariableMap& map = maps[t.variable];
      switch (map.form) {
        case Form::kShift:
          w.rhs -= t.coefficient * map.offset;
          w.terms.push_back(t);
          break;
        case Form::kReflect:
          w.rhs -= t.coefficient * map.offset;
          w.terms.push_back({t.variable, -t.coefficient});
          break;
        case Form::kFree:
          w.terms.push_back(t);
          break;
      }
    }
    rows.push_back(std::move(w));
  }
  for (std::size_t j = 0; j < n; ++j) {
    const Bound& b = program.bounds()[j];
    if (b.lower && b.upper) {
      rows.push_back({{{j, Rational(1)}}, Relation::kLessEqual,
                      *b.upper - *b.lower});
    }
  }

  // Normalize right-hand sides and lay out slack/artificial columns.
  std::size_t slacks = 0;
  std::size_t artificials = 0;
  for (WorkRow& w : rows) {
    if (sgn(w.rhs) < 0) {
      w.sign = -1;
      w.rhs = -w.rhs;
      for (Term& t : w.terms) t.coefficient = -t.coefficient;
      if (w.relation == Relation::kLessEqual) {
        w.relation = Relation::kGreaterEqual;
      } else if (w.relation == Relation::kGreaterEqual) {
        w.relation = Relation::kLessEqual;
      }
    }
    if (w.relation != Relation::kEqual) ++slacks;
    if (w.relation != Relation::kLessEqual) ++artificials;
  }

  Tableau t;
  t.m = rows.size();
  t.width = n + slacks + artificials;
  t.a.assign(t.m, std::vector<Rational>(t.width, Rational(0)));
  t.rhs.resize(t.m);
  t.basis.resize(t.m);
  t.basic_row.assign(t.width, -1);
  t.cost.assign(t.width, Rational(0));
  t.is_free.assign(t.width, 0);
  t.artificial.assign(t.width, 0);
  t.barred.assign(t.width, 0);
  t.flipped.assign(t.width, 0);
  for (std::size_t j = 0; j < n; ++j) t.is_free[j] = maps[j].form == Form::kFree;

  std::vector<std::size_t> identity(t.m);
  std::size_t next_slack = n;
  std::size_t next_artificial = n + slacks;
  for (std::size_t i = 0; i < t.m; ++i) {
    const WorkRow& w = rows[i];
    for (const Term& term : w.terms) t.a[i][term.variable] = term.coefficient;
    t.rhs[i] = w.rhs;
    if (w.relation == Relation::kLessEqual) {
      t.a[i][next_slack] = 1;
      identity[i] = next_slack++;
    } else {
      if (w.relation == Relation::kGreaterEqual) t.a[i][next_slack++] = -1;
      t.a[i][next_artificial] = 1;
      t.artificial[next_artificial] = 1;
      identity[i] = next_artificial++;
    }
    t.basis[i] = identity[i];
    t.basic_row[identity[i]] = static_cast<std::ptrdiff_t>(i);
  }

  LpSolution solution;
  if (artificials > 0) {
    for (std::size_t j = 0; j < t.width; ++j) {
      if (t.artificial[j]) t.cost[j] = -1;
    }
    t.price();
    run_simplex(t, options, solution.iterations);
    if (sgn(t.z) < 0) {
      solution.status = LpStatus::kInfeasible;
      return solution;
    }
    // Drive zero-level artificials out of the basis where possible; rows
    // where that fails are redundant and keep their artificial at zero.
    for (std::size_t i = 0; i < t.m; ++i) {
      if (!t.artificial[t.basis[i]]) continue;
      for (std::size_t j = 0; j < t.width; ++j) {
        if (!t.artificial[j] && sgn(t.a[i][j]) != 0) {
          t.pivot(i, j);
          break;
        }
      }
    }
    for (std::size_t j = 0; j < t.width; ++j) {
      if (t.artificial[j]) t.barred[j] = 1;
    }
  }
  for (std::size_t j = 0; j < t.width; ++j) {
    t.cost[j] = j < n ? (t.flipped[j] ? -cost[j] : cost[j]) : Rational(0);
  }
  t.price();
  if (run_simplex(t, options, solution.iterations) == Outcome::kUnbounded) {
    solution.status = LpStatus::kUnbounded;
    return solution;
  }

  solution.status = LpStatus::kOptimal;
  solution.primal.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    Rational value = t.basic_row[j] >= 0 ? t.rhs[t.basic_row[j]] : Rational(0);
    if (t.flipped[j]) value = -value;
    switch (maps[j].form) {
      case Form::kShift: value = maps[j].offset + value; break;
      case Form::kReflect: value = maps[j].offset - value; break;
      case Form::kFree: break;
    }
    solution.primal[j] = std::move(value);
  }
  solution.dual.resize(program.row_count());
  for (std::size_t r = 0; r < program.row_count(); ++r) {
    solution.dual[r] = -t.d[identity[r]] * rows[r].sign * s;
  }
  solution.reduced_costs = program.objective();
  for (std::size_t r = 0; r < program.row_count(); ++r) {
    const Rational& y = solution.dual[r];
    if (sgn(y) == 0) continue;
    for (const Term& term : program.row(r).terms) {
      solution.reduced_costs[term.variable] -= y * term.coefficient;
    }
  }
  solution.optimum = program.objective_value(solution.primal);
  if (s * t.z + constant * s != solution.optimum) {
    throw InvariantError("simplex objective drifted from the recomputed value");
  }
  certify(program, solution);
  return solution;
}

Rational dual_objective(const LpProgram& program, const LpSolution& solution) {
  Rational total = 0;
  for (std::size_t r = 0; r < program.row_count(); ++r) {
    total += program.row(r).rhs * solution.dual.at(r);
  }
  for (std::size_t j = 0; j < program.variables(); ++j) {
    const Rational& dj = solution.reduced_costs.at(j);
    if (sgn(dj) == 0) continue;
    const auto& bound = implied_bound(program.bounds()[j], dj, program.sense());
    if (!bound) {
      throw PreconditionError("reduced cost of " + program.variable_labels()[j] +
                              " has no bound to pair with");
    }
    total += dj * *bound;
  }
  return total;
}

std::vector<CsViolation> check_complementary_slackness(
    const LpProgram& program, const LpSolution& solution) {
  if (solution.status != LpStatus::kOptimal) {
    throw PreconditionError("complementary slackness needs an optimal solution");
  }
  if (solution.primal.size() != program.variables() ||
      solution.dual.size() != program.row_count() ||
      solution.reduced_costs.size() != program.variables()) {
    throw StructuralError("solution does not match the program's shape");
  }
  std::vector<CsViolation> out;
  for (std::size_t r = 0; r < program.row_count(); ++r) {
    const Rational& y = solution.dual[r];
    if (sgn(y) == 0) continue;
    Rational slack = program.row(r).rhs - program.activity(r, solution.primal);
    if (sgn(slack) != 0) {
      out.push_back({CsViolation::Kind::kRow, r, program.row(r).label, y,
                     std::move(slack)});
    }
  }
  for (std::size_t j = 0; j < program.variables(); ++j) {
    const Rational& dj = solution.reduced_costs[j];
    if (sgn(dj) == 0) continue;
    const auto& bound = implied_bound(program.bounds()[j], dj, program.sense());
    if (!bound || *bound != solution.primal[j]) {
      out.push_back({CsViolation::Kind::kVariable, j,
                     program.variable_labels()[j], dj,
                     bound ? Rational(*bound - solution.primal[j])
                           : Rational(0)});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// LP text export

namespace {

std::string lp_name(const std::string& label) {
  static const std::string kAllowed = "!\"#$%&()/,.;?@_`'{}|~";
  std::string name;
  name.reserve(label.size());
  for (char c : label) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) ||
                    kAllowed.find(c) != std::string::npos;
    name += ok ? c : '_';
  }
  if (name.empty() || std::isdigit(static_cast<unsigned char>(name[0])) ||
      name[0] == '.') {
    name.insert(0, "x_");
  }
  return name;
}

void write_terms(std::ostream& out, const std::vector<Term>& terms,
                 const mpz_class& scale,
                 const std::vector<std::string>& names) {
  bool first = true;
  for (const Term& t : terms) {
    const Rational scaled = t.coefficient * scale;
    const mpz_class value = scaled.get_num();
    if (first) {
      out << (value < 0 ? "- " : "");
    } else {
      out << (value < 0 ? " - " : " + ");
    }
    out << mpz_class(abs(value)).get_str() << ' ' << names[t.variable];
    first = false;
  }
  if (first) out << "0 " << names.at(0);
}

mpz_class row_scale(const std::vector<Term>& terms, const Rational& rhs) {
  std::vector<Rational> values{rhs};
  for (const Term& t : terms) values.push_back(t.coefficient);
  return common_denominator(values);
}

}  // namespace

void write_lp_format(const LpProgram& program, std::ostream& out) {
  std::vector<std::string> names;
  std::unordered_set<std::string> used;
  for (std::size_t j = 0; j < program.variables(); ++j) {
    std::string name = lp_name(program.variable_labels()[j]);
    if (!used.insert(name).second) {
      name += "#" + std::to_string(j);
      used.insert(name);
    }
    names.push_back(std::move(name));
  }
  if (names.empty()) names.push_back("x_empty");

  std::vector<Term> objective;
  for (std::size_t j = 0; j < program.variables(); ++j) {
    if (sgn(program.objective()[j]) != 0) {
      objective.push_back({j, program.objective()[j]});
    }
  }
  const mpz_class objective_scale = row_scale(objective, Rational(0));
  out << "\\ objective scaled by " << objective_scale.get_str() << '\n';
  out << (program.sense() == Sense::kMaximize ? "Maximize" : "Minimize")
      << "\n obj: ";
  write_terms(out, objective, objective_scale, names);
  out << "\nSubject To\n";

  std::unordered_set<std::string> row_names;
  auto unique_row = [&](std::string name) {
    if (!row_names.insert(name).second) {
      name += "#" + std::to_string(row_names.size());
      row_names.insert(name);
    }
    return name;
  };
  for (const LpRow& row : program.rows()) {
    const mpz_class scale = row_scale(row.terms, row.rhs);
    out << ' ' << unique_row(lp_name(row.label)) << ": ";
    write_terms(out, row.terms, scale, names);
    out << ' ' << to_string(row.relation) << ' '
        << Rational(row.rhs * scale).get_str() << '\n';
  }
  // Fractional bounds cannot be written exactly, so they become rows.
  std::vector<std::string> bound_lines;
  for (std::size_t j = 0; j < program.variables(); ++j) {
    const Bound& b = program.bounds()[j];
    auto integral = [](const std::optional<Rational>& v) {
      return v && v->get_den() == 1;
    };
    const bool lower_here = integral(b.lower);
    const bool upper_here = integral(b.upper);
    for (int side = 0; side < 2; ++side) {
      const auto& v = side == 0 ? b.lower : b.upper;
      if (!v || (side == 0 ? lower_here : upper_here)) continue;
      out << ' ' << unique_row("bound_" + names[j] + (side == 0 ? "_lo" : "_hi"))
          << ": " << v->get_den().get_str() << ' ' << names[j]
          << (side == 0 ? " >= " : " <= ") << v->get_num().get_str() << '\n';
    }
    const std::string lo = lower_here ? b.lower->get_str() : "-inf";
    if (upper_here) {
      bound_lines.push_back(lo + " <= " + names[j] + " <= " + b.upper->get_str());
    } else if (lower_here) {
      bound_lines.push_back(names[j] + " >= " + lo);
    } else {
      bound_lines.push_back(names[j] + " free");
    }
  }
  out << "Bounds\n";
  for (const std::string& line : bound_lines) out << ' ' << line << '\n';
  out << "End\n";
}

}  // namespace optauction
