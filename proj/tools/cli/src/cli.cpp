#include "optauction/cli/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "optauction/auction_lp.hpp"
#include "optauction/error.hpp"
#include "optauction/flow_tree.hpp"
#include "optauction/io/io.hpp"
#include "optauction/kkt.hpp"
#include "optauction/lp.hpp"
#include "optauction/single_item.hpp"
#include "optauction/truthfulness.hpp"
#include "optauction/virtuals.hpp"

namespace optauction::cli {

namespace {

using io::Json;

// Raised inside a command to leave with a specific exit code.
struct Exit {
  int code;
  std::string message;
};

std::string read_source(const std::string& path, std::istream& in) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }
  std::ifstream file(path);
  if (!file) throw Exit{kUsageError, "cannot read " + path};
  return {std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>()};
}

Json read_json(const std::string& path, std::istream& in) {
  try {
    return Json::parse(read_source(path, in));
  } catch (const Json::parse_error& e) {
    throw Exit{kUsageError, path + ": invalid JSON: " + e.what()};
  }
}

void emit(std::ostream& out, const Json& doc) { out << doc.dump(2) << '\n'; }

Json numbers(std::span<const Rational> values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(io::render(v));
  return out;
}

Json approximations(std::span<const Rational> values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(to_double(v));
  return out;
}

std::optional<Rational> alpha_flag(const std::string& text) {
  if (text.empty()) return std::nullopt;
  Rational alpha;
  try {
    alpha = parse_rational(text);
    validate_alpha(alpha);
  } catch (const Error& e) {
    throw Exit{kUsageError, "--alpha: " + std::string(e.what())};
  }
  return alpha;
}

// Applies --alpha and --tiebreak overrides to a parsed document.
void apply_overrides(io::InstanceDocument& doc, const std::string& alpha_text,
                     const std::string& tie_text) {
  const auto alpha = alpha_flag(alpha_text);
  std::optional<TieBreakRule> tie;
  if (!tie_text.empty()) {
    tie = io::parse_tie_break(tie_text, "--tiebreak");
    try {
      (void)tie->order(io::market_of(doc).bidders());
    } catch (const Error& e) {
      throw Exit{kUsageError, "--tiebreak: " + std::string(e.what())};
    }
  }
  if (auto* single = std::get_if<io::SingleParameterDocument>(&doc)) {
    if (alpha) single->alpha = *alpha;
    if (tie) single->tie_break = *tie;
    return;
  }
  auto& flow = std::get<io::FlowDocument>(doc);
  if (alpha) {
    flow.instance = FlowInstance(flow.instance.nodes(), flow.instance.edges(),
                                 flow.instance.bidders(), *alpha);
  }
  if (tie) flow.tie_break = *tie;
}

void guard_cells(const Instance& instance, std::size_t cap) {
  const std::size_t cells = instance.bidders() * instance.profiles().size();
  if (cells > cap) {
    throw SizeGuardError("instance has " + std::to_string(cells) +
                         " allocation cells, above the cap of " +
                         std::to_string(cap));
  }
}

Json violations_json(const Instance& instance,
                     const std::vector<ViolationReport>& reports) {
  Json out = Json::array();
  for (const auto& r : reports) {
    Json v = {{"kind", std::string(to_string(r.kind))},
              {"bidder", r.bidder},
              {"true_index", r.true_index},
              {"slack", io::render(r.slack)},
              {"description", describe(instance, r)}};
    v["deviation"] = r.deviation ? Json(*r.deviation) : Json("abstain");
    if (r.opponents) {
      v["opponents"] = instance.profiles().format_opponents(*r.opponents, r.bidder);
    }
    out.push_back(std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// virtual

struct VirtualArgs {
  std::string file;
  std::string alpha;
  bool ironed = false;
  std::string format = "json";
  bool decimal = false;
};

std::string pad(const std::string& s, std::size_t width) {
  return std::string(width > s.size() ? width - s.size() : 0, ' ') + s;
}

int cmd_virtual(const VirtualArgs& args, std::istream& in, std::ostream& out) {
  auto doc = io::parse_instance(read_json(args.file, in));
  apply_overrides(doc, args.alpha, "");
  const Instance& market = io::market_of(doc);
  const Rational& alpha = io::alpha_of(doc);
  const auto schedules = ironed_schedules(market, alpha);

  if (args.format == "text") {
    out << "alpha " << io::render(alpha) << '\n';
    for (std::size_t i = 0; i < market.bidders(); ++i) {
      const auto& s = schedules[i];
      std::vector<std::vector<std::string>> rows;
      std::vector<std::string> header{"k", "value", "raw"};
      if (args.ironed) {
        header.push_back("ironed");
        header.push_back("tau");
      }
      if (args.decimal) header.push_back("~raw");
      rows.push_back(header);
      for (std::size_t k = 0; k < s.schedule.raw.size(); ++k) {
        std::vector<std::string> row{std::to_string(k),
                                     io::render(market.prior(i).value(k)),
                                     io::render(s.schedule.raw[k])};
        if (args.ironed) {
          row.push_back(io::render(s.schedule.ironed[k]));
          row.push_back(io::render(s.certificate.tau[k]));
        }
        if (args.decimal) row.push_back(to_decimal(s.schedule.raw[k]));
        rows.push_back(std::move(row));
      }
      std::vector<std::size_t> width(header.size(), 0);
      for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
          width[c] = std::max(width[c], row[c].size());
        }
      }
      out << "bidder " << i << '\n';
      for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
          out << "  " << pad(row[c], width[c]);
        }
        out << '\n';
      }
    }
    return kOk;
  }

  Json bidders = Json::array();
  for (std::size_t i = 0; i < market.bidders(); ++i) {
    const auto& s = schedules[i];
    Json b = {{"bidder", i},
              {"values", numbers(market.prior(i).values())},
              {"raw", numbers(s.schedule.raw)}};
    if (args.ironed) {
      b["ironed"] = numbers(s.schedule.ironed);
      b["tau"] = numbers(s.certificate.tau);
      Json intervals = Json::array();
      for (const auto& iv : s.certificate.intervals) {
        intervals.push_back({iv.first, iv.last});
      }
      b["intervals"] = std::move(intervals);
    }
    if (args.decimal) {
      b["approximate"] = {{"raw", approximations(s.schedule.raw)}};
      if (args.ironed) b["approximate"]["ironed"] = approximations(s.schedule.ironed);
    }
    bidders.push_back(std::move(b));
  }
  emit(out, {{"alpha", io::render(alpha)}, {"bidders", std::move(bidders)}});
  return kOk;
}

// ---------------------------------------------------------------------------
// solve

struct SolveArgs {
  std::string file;
  std::string alpha;
  std::string tiebreak;
  std::string format = "json";
  bool decimal = false;
  std::size_t max_cells = 100000;
};

int cmd_solve(const SolveArgs& args, std::istream& in, std::ostream& out,
              std::ostream& err) {
  auto doc = io::parse_instance(read_json(args.file, in));
  apply_overrides(doc, args.alpha, args.tiebreak);
  const Instance& market = io::market_of(doc);
  guard_cells(market, args.max_cells);

  std::string mechanism;
  std::string tie;
  AuctionTable table(0, 0);
  if (auto* single = std::get_if<io::SingleParameterDocument>(&doc)) {
    tie = io::render(single->tie_break);
    if (single->feasibility) {
      mechanism = "general";
      table = build_general_auction(market, single->alpha, *single->feasibility,
                                    single->tie_break);
    } else {
      mechanism = "single-item";
      table = build_optimal_auction(market, single->alpha, single->tie_break);
    }
  } else {
    auto& flow = std::get<io::FlowDocument>(doc);
    tie = io::render(flow.tie_break);
    mechanism = "flow";
    table = build_flow_auction(flow.instance, flow.tie_break).table;
  }

  const auto dsic = check_dsic(market, table, CheckMode::kFull);
  if (args.format == "csv") {
    out << io::auction_to_csv(market, table);
  } else {
    Json result = io::auction_to_json(market, table, args.decimal);
    result["mechanism"] = mechanism;
    result["alpha"] = io::render(io::alpha_of(doc));
    result["tiebreak"] = tie;
    result["dsic_check"] = dsic.empty() ? "pass" : "fail";
    emit(out, result);
  }
  if (!dsic.empty()) {
    err << "built table fails the DSIC check: "
        << describe(market, dsic.front()) << '\n';
    return kVerificationFailure;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::string instance;
  std::string auction;
  std::string checks;
  std::string alpha;
  std::size_t oracle_cap = 2000;
};

std::vector<std::string> split_checks(const std::string& text, bool single_item) {
  std::vector<std::string> out;
  if (text.empty()) {
    out = {"dsic", "bic", "monotone", "kkt"};
    if (single_item) out.push_back("chain");
    return out;
  }
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    static const std::vector<std::string> known{"dsic", "bic", "monotone", "kkt",
                                                "chain"};
    if (std::find(known.begin(), known.end(), item) == known.end()) {
      throw Exit{kUsageError, "--checks: unknown check \"" + item + "\""};
    }
    if (item == "chain" && !single_item) {
      throw Exit{kUsageError, "--checks: chain applies to single-item instances"};
    }
    if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(item);
  }
  return out;
}

Json kkt_check(const io::InstanceDocument& doc, const AuctionTable& table) {
  const Instance& market = io::market_of(doc);
  Json violations = Json::array();
  if (const auto* single = std::get_if<io::SingleParameterDocument>(&doc)) {
    const FeasibilitySpec spec = single->feasibility
                                     ? *single->feasibility
                                     : FeasibilitySpec::simplex(market.bidders());
    if (!spec.linear()) {
      throw Exit{kUsageError,
                 "kkt: certificates are assembled for linear feasibility only"};
    }
    const auto cert =
        assemble_certificate(market, single->alpha, spec, single->tie_break);
    for (const auto& v :
         verify_kkt(market, single->alpha, spec, table, cert).violations) {
      violations.push_back({{"line", std::string(to_string(v.line))},
                            {"detail", v.detail}});
    }
  } else {
    const auto& flow = std::get<io::FlowDocument>(doc);
    const auto schedules = ironed_schedules(market, flow.instance.alpha());
    for (ProfileIndex q = 0; q < market.profiles().size(); ++q) {
      const auto run = run_combinatorial(flow.instance, q, schedules, flow.tie_break);
      std::vector<Rational> allocation;
      for (std::size_t i = 0; i < market.bidders(); ++i) {
        allocation.push_back(table.allocation(i, q));
      }
      for (const auto& v : verify_flow_kkt(flow.instance, q, allocation,
                                           run.certificate, schedules)
                               .violations) {
        violations.push_back({{"line", std::string(to_string(v.line))},
                              {"profile", market.profiles().format(q)},
                              {"detail", v.detail}});
      }
    }
  }
  return {{"pass", violations.empty()}, {"violations", std::move(violations)}};
}

Json chain_check(const Instance& market, const AuctionTable& table,
                 std::size_t cap) {
  ChainOptions options;
  options.build.variable_cap = cap;
  try {
    const ChainReport report = verify_chain(market, options);
    return {{"pass", true},
            {"optima",
             {{"LP1", io::render(report.lp1.solution.optimum)},
              {"BLP1", io::render(report.blp1.solution.optimum)},
              {"LP2", io::render(report.lp2.solution.optimum)},
              {"BLP2", io::render(report.blp2.solution.optimum)}}},
            {"lp1_positivity", std::string(to_string(report.lp1_positivity))},
            {"blp1_positivity", std::string(to_string(report.blp1_positivity))},
            {"table_revenue", io::render(expected_revenue(market, table))},
            {"table_attains_optimum",
             expected_revenue(market, table) == report.optimum()}};
  } catch (const CertificationError& e) {
    return {{"pass", false}, {"error", e.what()}};
  }
}

int cmd_verify(const VerifyArgs& args, std::istream& in, std::ostream& out) {
  auto doc = io::parse_instance(read_json(args.instance, in));
  apply_overrides(doc, args.alpha, "");
  const Instance& market = io::market_of(doc);
  const auto* single = std::get_if<io::SingleParameterDocument>(&doc);
  const auto checks =
      split_checks(args.checks, single != nullptr && !single->feasibility);
  AuctionTable table = io::auction_from_json(read_json(args.auction, in), market);

  Json results = Json::object();
  bool pass = true;
  for (const auto& check : checks) {
    Json result;
    if (check == "dsic") {
      auto v = check_dsic(market, table, CheckMode::kFull);
      result = {{"pass", v.empty()}, {"violations", violations_json(market, v)}};
    } else if (check == "bic") {
      auto v = check_bic(market, table, CheckMode::kFull);
      result = {{"pass", v.empty()}, {"violations", violations_json(market, v)}};
    } else if (check == "monotone") {
      auto v = check_monotonicity(market, table, MonotonicityScope::kExPost);
      result = {{"pass", v.empty()}, {"violations", violations_json(market, v)}};
    } else if (check == "kkt") {
      result = kkt_check(doc, table);
    } else {
      result = chain_check(market, table, args.oracle_cap);
    }
    pass = pass && result["pass"].get<bool>();
    results[check] = std::move(result);
  }
  emit(out, {{"pass", pass}, {"checks", std::move(results)}});
  return pass ? kOk : kVerificationFailure;
}

// ---------------------------------------------------------------------------
// oracle

struct OracleArgs {
  std::string file;
  std::string program = "chain";
  std::string pivot = "bland";
  std::string write_lp;
  bool duals = false;
  std::size_t max_cells = 2000;
};

int cmd_oracle(const OracleArgs& args, std::istream& in, std::ostream& out) {
  auto doc = io::parse_instance(read_json(args.file, in));
  const auto* single = std::get_if<io::SingleParameterDocument>(&doc);
  if (!single) throw Exit{kUsageError, "oracle: needs a single-parameter instance"};
  const Instance& market = single->instance;
  ChainOptions options;
  options.build.variable_cap = args.max_cells;
  options.solve.rule = args.pivot == "dantzig" ? PivotRule::kDantzigWithBlandFallback
                                               : PivotRule::kBland;

  if (args.program == "chain") {
    if (!args.write_lp.empty()) {
      throw Exit{kUsageError, "--write-lp needs a single --program"};
    }
    try {
      const ChainReport r = verify_chain(market, options);
      emit(out, {{"program", "chain"},
                 {"pass", true},
                 {"optima",
                  {{"LP1", io::render(r.lp1.solution.optimum)},
                   {"BLP1", io::render(r.blp1.solution.optimum)},
                   {"LP2", io::render(r.lp2.solution.optimum)},
                   {"BLP2", io::render(r.blp2.solution.optimum)}}},
                 {"lp1_positivity", std::string(to_string(r.lp1_positivity))},
                 {"blp1_positivity", std::string(to_string(r.blp1_positivity))},
                 {"lp1_upward_zero", r.lp1_upward_zero},
                 {"blp1_upward_zero", r.blp1_upward_zero}});
      return kOk;
    } catch (const CertificationError& e) {
      emit(out, {{"program", "chain"}, {"pass", false}, {"error", e.what()}});
      return kVerificationFailure;
    }
  }

  LpKind kind;
  if (args.program == "lp1") kind = LpKind::kLp1;
  else if (args.program == "blp1") kind = LpKind::kBlp1;
  else if (args.program == "lp2") kind = LpKind::kLp2;
  else kind = LpKind::kBlp2;
  const AuctionLp lp = build_auction_lp(kind, market, options.build);
  if (!args.write_lp.empty()) {
    std::ofstream file(args.write_lp);
    if (!file) throw Exit{kUsageError, "cannot write " + args.write_lp};
    write_lp_format(lp.program, file);
  }
  const LpSolution sol = solve(lp.program, options.solve);
  Json result = {{"program", std::string(to_string(kind))},
                 {"status", std::string(to_string(sol.status))},
                 {"rows", lp.program.row_count()},
                 {"variables", lp.program.variables()},
                 {"iterations", sol.iterations}};
  if (sol.status == LpStatus::kOptimal) {
    result["optimum"] = io::render(sol.optimum);
    result["dual_objective"] = io::render(dual_objective(lp.program, sol));
    if (args.duals) {
      Json duals = Json::object();
      for (std::size_t r = 0; r < lp.program.row_count(); ++r) {
        if (sgn(sol.dual[r]) != 0) {
          duals[lp.program.row(r).label] = io::render(sol.dual[r]);
        }
      }
      result["duals"] = std::move(duals);
    }
  }
  emit(out, result);
  return sol.status == LpStatus::kOptimal ? kOk : kVerificationFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal single-parameter auctions with exact certificates",
               "optauction"};
  app.require_subcommand(1);

  VirtualArgs va;
  auto* virt = app.add_subcommand("virtual", "Print (ironed) virtual values");
  virt->add_option("instance", va.file, "Instance JSON, or - for stdin")->required();
  virt->add_option("--alpha", va.alpha, "Revenue weight in [0,1] (overrides the file)");
  virt->add_flag("--ironed", va.ironed, "Include ironed values and multipliers");
  virt->add_option("--format", va.format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));
  virt->add_flag("--decimal", va.decimal, "Add floating approximations");

  SolveArgs sa;
  auto* solve_cmd = app.add_subcommand("solve", "Build the optimal auction");
  solve_cmd->add_option("instance", sa.file, "Instance JSON, or - for stdin")
      ->required();
  solve_cmd->add_option("--alpha", sa.alpha, "Revenue weight in [0,1]");
  solve_cmd->add_option("--tiebreak", sa.tiebreak, "lex or a permutation like 1,0");
  solve_cmd->add_option("--format", sa.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  solve_cmd->add_flag("--decimal", sa.decimal, "Add floating approximations");
  solve_cmd->add_option("--max-cells", sa.max_cells,
                        "Refuse instances with more bidder-profile cells");

  VerifyArgs ya;
  auto* verify_cmd = app.add_subcommand("verify", "Check an auction table");
  verify_cmd->add_option("instance", ya.instance, "Instance JSON")->required();
  verify_cmd->add_option("auction", ya.auction, "Auction JSON")->required();
  verify_cmd->add_option("--checks", ya.checks,
                         "Comma-separated subset of dsic,bic,monotone,kkt,chain");
  verify_cmd->add_option("--alpha", ya.alpha, "Revenue weight in [0,1]");
  verify_cmd->add_option("--oracle-cap", ya.oracle_cap,
                         "Allocation-cell cap for the LP chain");

  OracleArgs oa;
  auto* oracle_cmd = app.add_subcommand("oracle", "Solve the revenue programs exactly");
  oracle_cmd->add_option("instance", oa.file, "Instance JSON")->required();
  oracle_cmd->add_option("--program", oa.program, "lp1, blp1, lp2, blp2 or chain")
      ->check(CLI::IsMember({"lp1", "blp1", "lp2", "blp2", "chain"}));
  oracle_cmd->add_option("--pivot", oa.pivot, "bland or dantzig")
      ->check(CLI::IsMember({"bland", "dantzig"}));
  oracle_cmd->add_option("--write-lp", oa.write_lp, "Also write the program in LP format");
  oracle_cmd->add_flag("--duals", oa.duals, "List the non-zero row duals");
  oracle_cmd->add_option("--max-cells", oa.max_cells, "Allocation-cell cap");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*virt) return cmd_virtual(va, in, out);
    if (*solve_cmd) return cmd_solve(sa, in, out, err);
    if (*verify_cmd) return cmd_verify(ya, in, out);
    return cmd_oracle(oa, in, out);
  } catch (const Exit& e) {
    err << "error: " << e.message << '\n';
    return e.code;
  } catch (const io::SchemaError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const SizeGuardError& e) {
    err << "error: size guard: " << e.what() << '\n';
    return kSizeGuard;
  } catch (const CertificationError& e) {
    err << "error: " << e.what() << '\n';
    return kVerificationFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace optauction::cli
