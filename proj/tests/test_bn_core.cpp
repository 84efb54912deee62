#include <fstream>

#include "doctest.h"
#include "hetinf/bif.hpp"
#include "hetinf/bn.hpp"
#include "json.hpp"
#include "test_util.hpp"

using namespace hetinf;
using hetinf::testing::data_path;
using hetinf::testing::load_network;

TEST_CASE("asia parses to the published shape") {
  const auto net = load_network("asia");
  CHECK(net.var_count() == 8);
  CHECK(net.edge_count() == 8);
  CHECK(validate(net).ok());
  const auto stats = network_stats(net);
  CHECK(stats.parameter_count == 18);
  CHECK(stats.max_in_degree == 2);
  CHECK(stats.avg_markov_blanket == doctest::Approx(2.5));
  CHECK(stats.avg_degree == doctest::Approx(2.0));
}

TEST_CASE("alarm parses to the published shape") {
  const auto net = load_network("alarm");
  CHECK(net.var_count() == 37);
  CHECK(net.edge_count() == 46);
  const auto stats = network_stats(net);
  CHECK(stats.parameter_count == 509);
  CHECK(stats.avg_markov_blanket == doctest::Approx(3.51).epsilon(0.01));
  CHECK(stats.max_in_degree == 4);
}

TEST_CASE("survey stats") {
  const auto stats = network_stats(load_network("survey"));
  CHECK(stats.node_count == 6);
  CHECK(stats.edge_count == 6);
  CHECK(stats.parameter_count == 21);
}

TEST_CASE("single-variable document") {
  const auto net = parse_bif(
      "network n { }\n"
      "variable x { type discrete [ 2 ] { a, b }; }\n"
      "probability ( x ) { table 0.5, 0.5; }\n");
  CHECK(net.var_count() == 1);
  CHECK(net.edge_count() == 0);
  const auto stats = network_stats(net);
  CHECK(stats.parameter_count == 1);
  CHECK(stats.avg_markov_blanket == 0.0);
}

TEST_CASE("parser reports position on syntax errors") {
  try {
    parse_bif("network n { }\nvariable x { type discrete [ 2 ] { a b }; }");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.column > 0);
  }
}

TEST_CASE("parser rejects continuous variables") {
  CHECK_THROWS_AS(
      parse_bif("network n { }\nvariable x { type continuous; }"),
      ParseError);
}

TEST_CASE("parser rejects a missing CPT") {
  CHECK_THROWS_AS(
      parse_bif("network n { }\n"
                "variable x { type discrete [ 2 ] { a, b }; }\n"),
      ParseError);
}

TEST_CASE("parser rejects rows outside the 1e-6 sum tolerance") {
  CHECK_THROWS_AS(
      parse_bif("network n { }\n"
                "variable x { type discrete [ 2 ] { a, b }; }\n"
                "probability ( x ) { table 0.6, 0.6; }\n"),
      ParseError);
}

TEST_CASE("parser renormalizes rounded rows within tolerance") {
  const auto net = parse_bif(
      "network n { }\n"
      "variable x { type discrete [ 3 ] { a, b, c }; }\n"
      "probability ( x ) { table 0.3333333, 0.3333333, 0.3333333; }\n");
  double sum = 0.0;
  for (double p : net.cpts[0].table) sum += p;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("validate flags a bad row sum with its residual") {
  auto net = hetinf::testing::chain_ab();
  net.cpts[1].table = {0.6, 0.6, 0.2, 0.8};
  const auto rep = validate(net);
  CHECK(!rep.ok());
  CHECK(rep.max_row_residual == doctest::Approx(0.2));
}

TEST_CASE("validate flags the smallest cycle") {
  BayesianNetwork net;
  net.name = "cycle";
  for (int i = 0; i < 2; ++i) {
    VariableSpec v;
    v.name = i == 0 ? "a" : "b";
    v.states = {"x", "y"};
    v.index = i;
    net.variables.push_back(v);
  }
  for (int i = 0; i < 2; ++i) {
    Cpt c;
    c.child = i;
    c.parents = {1 - i};
    c.parent_cards = {2};
    c.card = 2;
    c.table = {0.5, 0.5, 0.5, 0.5};
    net.cpts.push_back(c);
  }
  const auto rep = validate(net);
  CHECK(!rep.acyclic);
  CHECK(!rep.ok());
  CHECK_THROWS_AS(topological_order(net), CycleError);
}

TEST_CASE("topological order basics") {
  const auto chain = parse_bif(
      "network n { }\n"
      "variable a { type discrete [ 2 ] { x, y }; }\n"
      "variable b { type discrete [ 2 ] { x, y }; }\n"
      "variable c { type discrete [ 2 ] { x, y }; }\n"
      "probability ( a ) { table 0.5, 0.5; }\n"
      "probability ( b | a ) { (x) 0.5, 0.5; (y) 0.5, 0.5; }\n"
      "probability ( c | b ) { (x) 0.5, 0.5; (y) 0.5, 0.5; }\n");
  CHECK(topological_order(chain) == std::vector<int>{0, 1, 2});

  const auto loose = parse_bif(
      "network n { }\n"
      "variable a { type discrete [ 2 ] { x, y }; }\n"
      "variable b { type discrete [ 2 ] { x, y }; }\n"
      "variable c { type discrete [ 2 ] { x, y }; }\n"
      "probability ( a ) { table 0.5, 0.5; }\n"
      "probability ( b ) { table 0.5, 0.5; }\n"
      "probability ( c ) { table 0.5, 0.5; }\n");
  CHECK(topological_order(loose) == std::vector<int>{0, 1, 2});

  const auto asia = load_network("asia");
  const auto order = topological_order(asia);
  const auto pos = [&](const std::string& n) {
    const int idx = asia.index_of(n);
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (order[i] == idx) return static_cast<int>(i);
    }
    return -1;
  };
  CHECK(pos("smoke") < pos("lung"));
}

TEST_CASE("markov blankets") {
  const auto vstruct = parse_bif(
      "network n { }\n"
      "variable a { type discrete [ 2 ] { x, y }; }\n"
      "variable b { type discrete [ 2 ] { x, y }; }\n"
      "variable c { type discrete [ 2 ] { x, y }; }\n"
      "variable lone { type discrete [ 2 ] { x, y }; }\n"
      "probability ( a ) { table 0.5, 0.5; }\n"
      "probability ( b ) { table 0.5, 0.5; }\n"
      "probability ( c | a, b ) { default 0.5, 0.5; }\n"
      "probability ( lone ) { table 0.5, 0.5; }\n");
  CHECK(markov_blanket(vstruct, 0) == std::vector<int>{1, 2});
  CHECK(markov_blanket(vstruct, 3).empty());

  const auto asia = load_network("asia");
  double total = 0.0;
  for (int j = 0; j < asia.var_count(); ++j) {
    total += static_cast<double>(markov_blanket(asia, j).size());
  }
  CHECK(total / asia.var_count() == doctest::Approx(2.5));
}

TEST_CASE("parse -> serialize -> parse round trip is exact") {
  for (const char* name :
       {"asia", "survey", "alarm", "child", "insurance", "win95pts"}) {
    const auto net = load_network(name);
    CHECK(validate(net).ok());
    const auto again = parse_bif(write_bif(net));
    CHECK(network_to_json(net) == network_to_json(again));
    CHECK(network_hash(net) == network_hash(again));
  }
}

TEST_CASE("network json round trips") {
  const auto net = load_network("survey");
  const auto again = network_from_json(network_to_json(net));
  CHECK(network_to_json(net) == network_to_json(again));
}

TEST_CASE("pinned dataset files match the manifest hashes") {
  const auto manifest =
      nlohmann::json::parse(read_text_file(data_path("manifest.json")));
  for (const auto& [file, hash] : manifest.at("files").items()) {
    const auto body = read_text_file(data_path(file));
    CHECK(hex64(fnv1a64(body)) == hash.get<std::string>());
  }
}

TEST_CASE("published stats reproduce for every pinned dataset") {
  struct Expect {
    const char* name;
    int nodes, edges;
    long long params;
    int max_in;
  };
  const Expect table[] = {
      {"alarm", 37, 46, 509, 4},   {"asia", 8, 8, 18, 2},
      {"child", 20, 25, 230, 2},   {"insurance", 27, 52, 984, 3},
      {"survey", 6, 6, 21, 2},     {"win95pts", 76, 112, 574, 7},
  };
  for (const auto& e : table) {
    const auto stats = network_stats(load_network(e.name));
    CHECK(stats.node_count == e.nodes);
    CHECK(stats.edge_count == e.edges);
    CHECK(stats.parameter_count == e.params);
    CHECK(stats.max_in_degree == e.max_in);
  }
}
