#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "optauction/io/io.hpp"
#include "optauction/single_item.hpp"

using namespace optauction;
using namespace optauction::testing;
using io::Json;

namespace {

std::string path_of_error(const std::string& text) {
  try {
    io::parse_instance_text(text);
  } catch (const io::SchemaError& e) {
    return e.path();
  }
  return "<no error>";
}

}  // namespace

TEST(ParseNumber, ExactForms) {
  EXPECT_EQ(io::parse_number(Json("1/3"), "$"), ratio(1, 3));
  EXPECT_EQ(io::parse_number(Json("2/4"), "$"), ratio(1, 2));
  EXPECT_EQ(io::parse_number(Json("0.6"), "$"), ratio(3, 5));
  EXPECT_EQ(io::parse_number(Json(7), "$"), 7);
  EXPECT_THROW(io::parse_number(Json(0.5), "$"), io::SchemaError);
  EXPECT_THROW(io::parse_number(Json("1/0"), "$"), io::SchemaError);
  EXPECT_THROW(io::parse_number(Json("x"), "$"), io::SchemaError);
  EXPECT_EQ(io::render(ratio(-6, 4)), "-3/2");
  EXPECT_EQ(io::render(Rational(5)), "5");
}

TEST(ParseTieBreak, Forms) {
  EXPECT_EQ(io::parse_tie_break("lex", "$"), TieBreakRule::lexicographic());
  EXPECT_EQ(io::parse_tie_break("2,0,1", "$"), TieBreakRule::fixed_permutation({2, 0, 1}));
  EXPECT_EQ(io::render(TieBreakRule::fixed_permutation({2, 0, 1})), "2,0,1");
  EXPECT_EQ(io::render(TieBreakRule::lexicographic()), "lex");
  EXPECT_THROW(io::parse_tie_break("2,x", "$"), io::SchemaError);
}

TEST(ParseInstance, SingleParameter) {
  const auto doc = io::parse_instance_text(R"({
    "kind": "single-parameter",
    "bidders": [{"values": ["1","2","3"], "masses": ["1/3","1/3","1/3"]}],
    "alpha": "1/2", "tiebreak": "lex"})");
  const auto& sp = std::get<io::SingleParameterDocument>(doc);
  EXPECT_EQ(sp.alpha, ratio(1, 2));
  EXPECT_FALSE(sp.feasibility.has_value());
  EXPECT_EQ(sp.instance.prior(0), uniform123());
}

TEST(ParseInstance, FeasibilityForms) {
  const auto units = io::parse_instance_text(R"({"kind":"single-parameter",
    "bidders":[{"values":["1"],"masses":["1"]},{"values":["1"],"masses":["1"]}],
    "feasibility":{"type":"units","units":1}})");
  EXPECT_EQ(std::get<io::SingleParameterDocument>(units).feasibility->size(), 5u);
  const auto linear = io::parse_instance_text(R"({"kind":"single-parameter",
    "bidders":[{"values":["1"],"masses":["1"]},{"values":["1"],"masses":["1"]}],
    "feasibility":{"type":"linear","constraints":[
      {"label":"pair","coefficients":["1","2"],"rhs":"1"}],"smooth":["unit-ball"]}})");
  const auto& spec = *std::get<io::SingleParameterDocument>(linear).feasibility;
  EXPECT_EQ(spec.size(), 2u);
  EXPECT_FALSE(spec.linear());
}

TEST(ParseInstance, Flow) {
  const auto doc = io::parse_instance_text(R"({"kind":"flow","nodes":2,
    "edges":[{"from":0,"to":1,"capacity":"1"}],
    "bidders":[{"source":0,"sink":1,"demand":"3/5","values":["1"],"masses":["1"]}],
    "alpha":"1/4"})");
  const auto& flow = std::get<io::FlowDocument>(doc);
  EXPECT_EQ(flow.instance.bidders()[0].demand, ratio(3, 5));
  EXPECT_EQ(io::alpha_of(doc), ratio(1, 4));
  EXPECT_EQ(io::market_of(doc).bidders(), 1u);
}

TEST(ParseInstance, ErrorPaths) {
  EXPECT_EQ(path_of_error("{"), "$");
  EXPECT_EQ(path_of_error(R"({"kind":"auction"})"), "$.kind");
  EXPECT_EQ(path_of_error(R"({"kind":"single-parameter","bidders":[
    {"values":["1","2"],"masses":["1/2","1/3"]}]})"),
            "$.bidders[0]");
  EXPECT_EQ(path_of_error(R"({"kind":"single-parameter","bidders":[
    {"values":["1","2"],"masses":["1/2",0.5]}]})"),
            "$.bidders[0].masses[1]");
  EXPECT_EQ(path_of_error(R"({"kind":"single-parameter","bidders":[
    {"values":["1"],"masses":["1"]}],"extra":1})"),
            "$.extra");
  EXPECT_EQ(path_of_error(R"({"kind":"single-parameter","bidders":[]})"), "$.bidders");
  EXPECT_EQ(path_of_error(R"({"kind":"single-parameter","alpha":"2","bidders":[
    {"values":["1"],"masses":["1"]}]})"),
            "$.alpha");
}

TEST(AuctionJson, RoundTripsRandomTables) {
  Rng rng(101);
  for (int t = 0; t < 40; ++t) {
    const Instance inst = random_instance(rng, uniform_index(rng, 1, 3), 3);
    const AuctionTable table = random_table(rng, inst);
    const Json doc = io::auction_to_json(inst, table, false);
    const Json reparsed = Json::parse(doc.dump());
    EXPECT_EQ(io::auction_from_json(reparsed, inst), table);
    EXPECT_EQ(doc["summary"]["expected_revenue"],
              io::render(expected_revenue(inst, table)));
  }
}

TEST(AuctionJson, DecimalIsSeparate) {
  const Instance inst = one_uniform123();
  const Json doc = io::auction_to_json(inst, build_optimal_auction(inst, 1), true);
  EXPECT_EQ(doc["summary"]["expected_revenue"], "4/3");
  EXPECT_TRUE(doc.contains("approximate"));
  EXPECT_FALSE(doc["summary"].contains("approximate"));
}

TEST(AuctionJson, RejectsMismatches) {
  const Instance inst = one_uniform123();
  Json doc = io::auction_to_json(inst, build_optimal_auction(inst, 1), false);
  EXPECT_THROW(io::auction_from_json(doc, two_uniform123()), io::SchemaError);
  Json dup = doc;
  dup["profiles"][1] = dup["profiles"][0];
  EXPECT_THROW(io::auction_from_json(dup, inst), io::SchemaError);
  Json missing = doc;
  missing["profiles"].erase(2);
  EXPECT_THROW(io::auction_from_json(missing, inst), io::SchemaError);
}

TEST(AuctionCsv, Layout) {
  const Instance inst = one_uniform123();
  EXPECT_EQ(io::auction_to_csv(inst, build_optimal_auction(inst, 1)),
            "profile,bidder,allocation,payment\n"
            "0,0,0,0\n"
            "1,0,1,2\n"
            "2,0,1,2\n");
}
