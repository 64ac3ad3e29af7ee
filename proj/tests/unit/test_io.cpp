#include <doctest.h>

#include <cmath>

#include "capquad/cubature.hpp"
#include "capquad/io.hpp"
#include "capquad/verifier.hpp"

using namespace capquad;
using nlohmann::json;

TEST_CASE("shortest round-trip float formatting") {
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(1.0) == "1");
  CHECK(std::stod(io::format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("rules survive write, read, write byte for byte") {
  const Domain cap = Cap(SpherePoint(0.0, 0.6, 0.8), 0.7);
  const CubatureRule rule = std::get<CubatureRule>(build_cubature(cap, 5, 0.25, 9));
  const std::string first = io::dump_canonical(io::to_json(rule));
  const CubatureRule back = io::rule_from_json(json::parse(first));
  CHECK(io::dump_canonical(io::to_json(back)) == first);
  CHECK(back.weights == rule.weights);
  CHECK(back.nodes.points == rule.nodes.points);
  CHECK(back.degree == 5);
  CHECK(first.back() == '\n');
  CHECK(first.find("\"version\": \"capquad-rule/1\"") != std::string::npos);

  const NodeSet nodes = maximal_node_set(Collar(SpherePoint::pole(2), 0.5, 1.0), 4, 0.5, 2);
  const std::string text = io::dump_canonical(io::to_json(nodes));
  CHECK(io::dump_canonical(io::to_json(io::node_set_from_json(json::parse(text)))) == text);
}

TEST_CASE("malformed rule files are rejected") {
  const Domain cap = Cap(SpherePoint::pole(2), 1.0);
  const CubatureRule rule = std::get<CubatureRule>(build_cubature(cap, 2, 0.5, 1));
  const json good = io::to_json(rule);

  json bad = good;
  bad["version"] = "capquad-rule/0";
  CHECK_THROWS_AS((void)io::rule_from_json(bad), io::FormatError);
  bad = good;
  bad["weights"].erase(0);
  CHECK_THROWS_AS((void)io::rule_from_json(bad), io::FormatError);
  bad = good;
  bad["weights"][0] = -1.0;
  CHECK_THROWS_AS((void)io::rule_from_json(bad), io::FormatError);
  bad = good;
  bad["nodes"][0] = {0.0, 0.0, 2.0};
  CHECK_THROWS_AS((void)io::rule_from_json(bad), io::FormatError);
  bad = good;
  bad["nodes"][0] = {0.0, 0.0, -1.0};
  CHECK_THROWS_AS((void)io::rule_from_json(bad), io::FormatError);
  bad = good;
  bad["d"] = 3;
  CHECK_THROWS_AS((void)io::rule_from_json(bad), io::FormatError);
  CHECK_THROWS_AS((void)io::read_json_file("/nonexistent/rule.json"), io::FormatError);
}

TEST_CASE("reports round-trip and export to CSV") {
  VerificationReport r;
  r.inequality = "mz";
  r.grid = {{"p", 2.0}};
  r.trials = 3;
  r.seed = 7;
  ReportCell cell;
  cell.params = {{"n", 8}, {"alpha", 1.0}};
  RatioStats s;
  s.add(0.9);
  s.add(1.1);
  cell.stats = {{"ratio", s}};
  cell.values = {{"spread", s.spread()}};
  r.cells = {cell, cell};
  r.notes = {"note, with comma"};
  const std::string text = io::dump_canonical(io::to_json(r));
  CHECK(io::dump_canonical(io::to_json(io::report_from_json(json::parse(text)))) == text);
  CHECK(text.find("wall_time") == std::string::npos);

  const std::string csv = io::report_to_csv(r);
  CHECK(csv.substr(0, csv.find('\n')) ==
        "n,alpha,ratio_min,ratio_max,ratio_mean,ratio_count,spread");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
