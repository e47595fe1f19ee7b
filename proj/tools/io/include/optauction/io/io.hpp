#pragma once

// JSON instance and auction documents. Exact numbers are "p/q" strings (JSON
// integers are also accepted on input); value indices and profiles are
// 0-based.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "optauction/core_model.hpp"
#include "optauction/error.hpp"
#include "optauction/flow_tree.hpp"
#include "optauction/kkt.hpp"
#include "optauction/single_item.hpp"

namespace optauction::io {

using Json = nlohmann::json;

// Malformed document; `path` locates the offending field ("$.bidders[0]").
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct SingleParameterDocument {
  Instance instance;
  Rational alpha = 1;
  // Absent: the single-item simplex.
  std::optional<FeasibilitySpec> feasibility;
  TieBreakRule tie_break = TieBreakRule::lexicographic();
};

struct FlowDocument {
  FlowInstance instance;
  TieBreakRule tie_break = TieBreakRule::lexicographic();
};

using InstanceDocument = std::variant<SingleParameterDocument, FlowDocument>;

// Both parsers validate the whole document before building anything and
// report library validation errors (DomainError, StructuralError) as
// SchemaError at the closest path.
InstanceDocument parse_instance(const Json& doc);
InstanceDocument parse_instance_text(const std::string& text);

const Instance& market_of(const InstanceDocument& doc);
const Rational& alpha_of(const InstanceDocument& doc);

// "p/q", "p" or a JSON integer.
Rational parse_number(const Json& value, const std::string& path);
std::string render(const Rational& value);

// "lex" or a comma-separated permutation such as "2,0,1".
TieBreakRule parse_tie_break(const std::string& text, const std::string& path);
std::string render(const TieBreakRule& rule);

struct AuctionSummary {
  Rational expected_revenue;
  Rational expected_welfare;
};

// {"kind":"auction","bidders":n,"profiles":[{"profile":[...],
// "allocation":[...],"payment":[...]}...],"summary":{...}}. With
// `decimal`, a separate "approximate" object carries floating renderings.
Json auction_to_json(const Instance& instance, const AuctionTable& table,
                     bool decimal);
AuctionTable auction_from_json(const Json& doc, const Instance& instance);
AuctionSummary summarize(const Instance& instance, const AuctionTable& table);

// profile,bidder,allocation,payment rows; the profile column is the value
// indices joined by ';'.
std::string auction_to_csv(const Instance& instance, const AuctionTable& table);

}  // namespace optauction::io
