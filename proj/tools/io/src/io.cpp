#include "optauction/io/io.hpp"

#include <sstream>

#include "optauction/error.hpp"
#include "optauction/rational.hpp"

namespace optauction::io {

namespace {

std::string at(const std::string& path, const std::string& key) {
  return path + "." + key;
}
std::string at(const std::string& path, std::size_t index) {
  return path + "[" + std::to_string(index) + "]";
}

const Json& require(const Json& object, const std::string& key,
                    const std::string& path) {
  if (!object.is_object()) throw SchemaError(path, "expected an object");
  auto it = object.find(key);
  if (it == object.end()) throw SchemaError(at(path, key), "missing field");
  return *it;
}

const Json& require_array(const Json& object, const std::string& key,
                          const std::string& path) {
  const Json& value = require(object, key, path);
  if (!value.is_array()) throw SchemaError(at(path, key), "expected an array");
  return value;
}

std::size_t parse_index(const Json& value, const std::string& path) {
  if (!value.is_number_integer() || value.get<long long>() < 0) {
    throw SchemaError(path, "expected a non-negative integer");
  }
  return value.get<std::size_t>();
}

void reject_unknown(const Json& object, std::initializer_list<const char*> keys,
                    const std::string& path) {
  for (auto it = object.begin(); it != object.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) throw SchemaError(at(path, it.key()), "unknown field");
  }
}

std::vector<Rational> parse_numbers(const Json& array, const std::string& path) {
  std::vector<Rational> out;
  for (std::size_t k = 0; k < array.size(); ++k) {
    out.push_back(parse_number(array[k], at(path, k)));
  }
  return out;
}

DiscretePrior parse_prior(const Json& bidder, const std::string& path) {
  auto values = parse_numbers(require_array(bidder, "values", path),
                              at(path, "values"));
  const Json* masses_json = bidder.contains("masses") ? &bidder["masses"] : nullptr;
  try {
    if (!masses_json) return DiscretePrior::uniform(std::move(values));
    if (!masses_json->is_array()) {
      throw SchemaError(at(path, "masses"), "expected an array");
    }
    return DiscretePrior(std::move(values),
                         parse_numbers(*masses_json, at(path, "masses")));
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(path, e.what());
  }
}

Rational parse_alpha(const Json& doc) {
  if (!doc.contains("alpha")) return 1;
  Rational alpha = parse_number(doc["alpha"], "$.alpha");
  try {
    validate_alpha(alpha);
  } catch (const Error& e) {
    throw SchemaError("$.alpha", e.what());
  }
  return alpha;
}

TieBreakRule parse_tie_break_field(const Json& doc) {
  if (!doc.contains("tiebreak")) return TieBreakRule::lexicographic();
  const Json& value = doc["tiebreak"];
  if (value.is_string()) return parse_tie_break(value.get<std::string>(), "$.tiebreak");
  if (!value.is_array()) {
    throw SchemaError("$.tiebreak", "expected \"lex\" or a permutation");
  }
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < value.size(); ++k) {
    order.push_back(parse_index(value[k], at("$.tiebreak", k)));
  }
  return TieBreakRule::fixed_permutation(std::move(order));
}

void check_tie_break(const TieBreakRule& rule, std::size_t n) {
  try {
    (void)rule.order(n);
  } catch (const Error& e) {
    throw SchemaError("$.tiebreak", e.what());
  }
}

FeasibilitySpec parse_feasibility(const Json& value, std::size_t n) {
  const std::string path = "$.feasibility";
  std::string type;
  if (value.is_string()) {
    type = value.get<std::string>();
  } else if (value.is_object()) {
    const Json& t = require(value, "type", path);
    if (!t.is_string()) throw SchemaError(at(path, "type"), "expected a string");
    type = t.get<std::string>();
  } else {
    throw SchemaError(path, "expected a string or an object");
  }
  if (type == "simplex") return FeasibilitySpec::simplex(n);
  if (type == "digital-goods") return FeasibilitySpec::digital_goods(n);
  if (type == "units") {
    if (!value.is_object()) throw SchemaError(path, "units needs a \"units\" count");
    return FeasibilitySpec::units(n, parse_index(require(value, "units", path),
                                                 at(path, "units")));
  }
  if (type != "linear") {
    throw SchemaError(at(path, "type"), "unknown feasibility type \"" + type + "\"");
  }
  reject_unknown(value, {"type", "constraints", "smooth"}, path);
  FeasibilitySpec spec(n);
  const Json& rows = require_array(value, "constraints", path);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const std::string rp = at(at(path, "constraints"), j);
    const Json& row = rows[j];
    std::string label = "g" + std::to_string(j);
    if (row.is_object() && row.contains("label")) {
      if (!row["label"].is_string()) {
        throw SchemaError(at(rp, "label"), "expected a string");
      }
      label = row["label"].get<std::string>();
    }
    auto coefficients = parse_numbers(require_array(row, "coefficients", rp),
                                      at(rp, "coefficients"));
    if (coefficients.size() != n) {
      throw SchemaError(at(rp, "coefficients"),
                        "expected " + std::to_string(n) + " coefficients");
    }
    spec.add_linear(std::move(label), std::move(coefficients),
                    parse_number(require(row, "rhs", rp), at(rp, "rhs")));
  }
  if (value.contains("smooth")) {
    const Json& smooth = value["smooth"];
    if (!smooth.is_array()) throw SchemaError(at(path, "smooth"), "expected an array");
    for (std::size_t j = 0; j < smooth.size(); ++j) {
      if (!smooth[j].is_string()) {
        throw SchemaError(at(at(path, "smooth"), j), "expected a name");
      }
      try {
        spec.add_smooth(smooth_constraint(smooth[j].get<std::string>()));
      } catch (const Error& e) {
        throw SchemaError(at(at(path, "smooth"), j), e.what());
      }
    }
  }
  return spec;
}

SingleParameterDocument parse_single(const Json& doc) {
  reject_unknown(doc, {"kind", "bidders", "alpha", "feasibility", "tiebreak"}, "$");
  const Json& bidders = require_array(doc, "bidders", "$");
  if (bidders.empty()) throw SchemaError("$.bidders", "needs at least one bidder");
  std::vector<DiscretePrior> priors;
  for (std::size_t i = 0; i < bidders.size(); ++i) {
    const std::string path = at("$.bidders", i);
    if (!bidders[i].is_object()) throw SchemaError(path, "expected an object");
    reject_unknown(bidders[i], {"values", "masses"}, path);
    priors.push_back(parse_prior(bidders[i], path));
  }
  const std::size_t n = priors.size();
  SingleParameterDocument out{Instance(std::move(priors)), parse_alpha(doc),
                              std::nullopt, parse_tie_break_field(doc)};
  check_tie_break(out.tie_break, n);
  if (doc.contains("feasibility")) out.feasibility = parse_feasibility(doc["feasibility"], n);
  return out;
}

FlowDocument parse_flow(const Json& doc) {
  reject_unknown(doc, {"kind", "nodes", "edges", "bidders", "alpha", "tiebreak"}, "$");
  const std::size_t nodes = parse_index(require(doc, "nodes", "$"), "$.nodes");
  std::vector<FlowEdge> edges;
  const Json& edge_list = require_array(doc, "edges", "$");
  for (std::size_t e = 0; e < edge_list.size(); ++e) {
    const std::string path = at("$.edges", e);
    const Json& edge = edge_list[e];
    if (!edge.is_object()) throw SchemaError(path, "expected an object");
    reject_unknown(edge, {"from", "to", "capacity"}, path);
    FlowEdge parsed{parse_index(require(edge, "from", path), at(path, "from")),
                    parse_index(require(edge, "to", path), at(path, "to")),
                    parse_number(require(edge, "capacity", path),
                                 at(path, "capacity"))};
    if (parsed.from >= nodes || parsed.to >= nodes) {
      throw SchemaError(path, "endpoint outside 0.." + std::to_string(nodes - 1));
    }
    if (sgn(parsed.capacity) <= 0) {
      throw SchemaError(at(path, "capacity"), "capacity must be positive");
    }
    edges.push_back(std::move(parsed));
  }
  std::vector<FlowBidder> bidders;
  const Json& bidder_list = require_array(doc, "bidders", "$");
  if (bidder_list.empty()) throw SchemaError("$.bidders", "needs at least one bidder");
  for (std::size_t i = 0; i < bidder_list.size(); ++i) {
    const std::string path = at("$.bidders", i);
    const Json& b = bidder_list[i];
    if (!b.is_object()) throw SchemaError(path, "expected an object");
    reject_unknown(b, {"source", "sink", "demand", "values", "masses"}, path);
    FlowBidder parsed{parse_index(require(b, "source", path), at(path, "source")),
                      parse_index(require(b, "sink", path), at(path, "sink")),
                      parse_number(require(b, "demand", path), at(path, "demand")),
                      parse_prior(b, path)};
    if (sgn(parsed.demand) <= 0) {
      throw SchemaError(at(path, "demand"), "demand must be positive");
    }
    bidders.push_back(std::move(parsed));
  }
  const std::size_t n = bidders.size();
  const Rational alpha = parse_alpha(doc);
  try {
    FlowDocument out{FlowInstance(nodes, std::move(edges), std::move(bidders), alpha),
                     parse_tie_break_field(doc)};
    check_tie_break(out.tie_break, n);
    return out;
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError("$", e.what());
  }
}

}  // namespace

Rational parse_number(const Json& value, const std::string& path) {
  if (value.is_number_integer()) return Rational(value.get<long>());
  if (!value.is_string()) {
    throw SchemaError(path, "expected an exact number such as \"1/3\"");
  }
  try {
    return parse_rational(value.get<std::string>());
  } catch (const Error& e) {
    throw SchemaError(path, e.what());
  }
}

std::string render(const Rational& value) { return to_string(value); }

TieBreakRule parse_tie_break(const std::string& text, const std::string& path) {
  if (text == "lex" || text == "lexicographic") return TieBreakRule::lexicographic();
  std::vector<std::size_t> order;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
      throw SchemaError(path, "expected \"lex\" or a permutation like 2,0,1");
    }
    order.push_back(std::stoul(item));
  }
  if (order.empty()) throw SchemaError(path, "empty tie-break permutation");
  return TieBreakRule::fixed_permutation(std::move(order));
}

std::string render(const TieBreakRule& rule) {
  if (rule.kind() == TieBreakRule::Kind::kLexicographic) return "lex";
  std::string out;
  for (std::size_t i : rule.permutation()) {
    if (!out.empty()) out += ',';
    out += std::to_string(i);
  }
  return out;
}

InstanceDocument parse_instance(const Json& doc) {
  if (!doc.is_object()) throw SchemaError("$", "expected an object");
  const Json& kind = require(doc, "kind", "$");
  if (!kind.is_string()) throw SchemaError("$.kind", "expected a string");
  if (kind == "single-parameter") return parse_single(doc);
  if (kind == "flow") return parse_flow(doc);
  throw SchemaError("$.kind", "expected \"single-parameter\" or \"flow\"");
}

InstanceDocument parse_instance_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError("$", std::string("invalid JSON: ") + e.what());
  }
  return parse_instance(doc);
}

const Instance& market_of(const InstanceDocument& doc) {
  if (const auto* single = std::get_if<SingleParameterDocument>(&doc)) {
    return single->instance;
  }
  return std::get<FlowDocument>(doc).instance.market();
}

const Rational& alpha_of(const InstanceDocument& doc) {
  if (const auto* single = std::get_if<SingleParameterDocument>(&doc)) {
    return single->alpha;
  }
  return std::get<FlowDocument>(doc).instance.alpha();
}

AuctionSummary summarize(const Instance& instance, const AuctionTable& table) {
  return {expected_revenue(instance, table), expected_welfare(instance, table)};
}

Json auction_to_json(const Instance& instance, const AuctionTable& table,
                     bool decimal) {
  const ProfileSpace& space = instance.profiles();
  Json profiles = Json::array();
  for (ProfileIndex q = 0; q < space.size(); ++q) {
    Json allocation = Json::array(), payment = Json::array();
    for (std::size_t i = 0; i < instance.bidders(); ++i) {
      allocation.push_back(render(table.allocation(i, q)));
      payment.push_back(render(table.payment(i, q)));
    }
    profiles.push_back({{"profile", space.decode(q)},
                        {"allocation", std::move(allocation)},
                        {"payment", std::move(payment)}});
  }
  const AuctionSummary summary = summarize(instance, table);
  Json doc = {{"kind", "auction"},
              {"bidders", instance.bidders()},
              {"profiles", std::move(profiles)},
              {"summary",
               {{"expected_revenue", render(summary.expected_revenue)},
                {"expected_welfare", render(summary.expected_welfare)}}}};
  if (decimal) {
    doc["approximate"] = {
        {"expected_revenue", to_double(summary.expected_revenue)},
        {"expected_welfare", to_double(summary.expected_welfare)}};
  }
  return doc;
}

AuctionTable auction_from_json(const Json& doc, const Instance& instance) {
  if (!doc.is_object()) throw SchemaError("$", "expected an object");
  const Json& kind = require(doc, "kind", "$");
  if (kind != "auction") throw SchemaError("$.kind", "expected \"auction\"");
  const std::size_t n = parse_index(require(doc, "bidders", "$"), "$.bidders");
  if (n != instance.bidders()) {
    throw SchemaError("$.bidders", "auction has " + std::to_string(n) +
                                       " bidders, instance has " +
                                       std::to_string(instance.bidders()));
  }
  const ProfileSpace& space = instance.profiles();
  AuctionTable table(n, space.size());
  std::vector<bool> seen(space.size(), false);
  const Json& profiles = require_array(doc, "profiles", "$");
  for (std::size_t r = 0; r < profiles.size(); ++r) {
    const std::string path = at("$.profiles", r);
    const Json& row = profiles[r];
    const Json& coords = require_array(row, "profile", path);
    std::vector<std::size_t> indices;
    for (std::size_t i = 0; i < coords.size(); ++i) {
      indices.push_back(parse_index(coords[i], at(at(path, "profile"), i)));
    }
    ProfileIndex q;
    try {
      q = space.encode(indices);
    } catch (const Error& e) {
      throw SchemaError(at(path, "profile"), e.what());
    }
    if (seen[q]) throw SchemaError(at(path, "profile"), "duplicate profile");
    seen[q] = true;
    const Json& allocation = require_array(row, "allocation", path);
    const Json& payment = require_array(row, "payment", path);
    if (allocation.size() != n || payment.size() != n) {
      throw SchemaError(path, "expected " + std::to_string(n) +
                                  " allocation and payment entries");
    }
    for (std::size_t i = 0; i < n; ++i) {
      Rational a = parse_number(allocation[i], at(at(path, "allocation"), i));
      if (sgn(a) < 0) {
        throw SchemaError(at(at(path, "allocation"), i), "negative allocation");
      }
      table.set(i, q, std::move(a),
                parse_number(payment[i], at(at(path, "payment"), i)));
    }
  }
  for (ProfileIndex q = 0; q < space.size(); ++q) {
    if (!seen[q]) {
      throw SchemaError("$.profiles", "profile " + space.format(q) + " missing");
    }
  }
  return table;
}

std::string auction_to_csv(const Instance& instance, const AuctionTable& table) {
  const ProfileSpace& space = instance.profiles();
  std::ostringstream out;
  out << "profile,bidder,allocation,payment\n";
  for (ProfileIndex q = 0; q < space.size(); ++q) {
    std::string profile;
    for (std::size_t k : space.decode(q)) {
      if (!profile.empty()) profile += ';';
      profile += std::to_string(k);
    }
    for (std::size_t i = 0; i < instance.bidders(); ++i) {
      out << profile << ',' << i << ',' << render(table.allocation(i, q)) << ','
          << render(table.payment(i, q)) << '\n';
    }
  }
  return out.str();
}

}  // namespace optauction::io
