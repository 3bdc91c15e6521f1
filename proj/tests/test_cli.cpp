#include <doctest.h>

#include <cstdlib>
#include <regex>
#include <set>
#include <sstream>

#include "bsfp/cli.hpp"
#include "bsfp/congestion.hpp"
#include "bsfp/error.hpp"
#include "test_util.hpp"

using namespace bsfp;
using bsfp::testing::TempDir;
using bsfp::testing::read_text;
using bsfp::testing::write_text;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("gen writes a loadable circuit") {
  TempDir dir;
  const auto path = dir.file("c.json").string();
  const auto r = call({"gen", "--seed", "3", "--modules", "7", "--alignments", "2", "--out", path});
  REQUIRE(r.code == 0);
  const auto c = load_circuit(path);
  CHECK(c.size() == 7);
  CHECK(c.alignments.size() == 2);
  CHECK(c == gen_circuit(3, 7, 0.8, 2));
}

TEST_CASE("run writes floorplan, record, svg and csv") {
  TempDir dir;
  const auto circ = dir.file("c.json").string();
  REQUIRE(call({"gen", "--seed", "5", "-m", "8", "-o", circ}).code == 0);
  for (std::string algo : {"bsrl", "greedy", "sa"}) {
    const auto fp = dir.file(algo + ".json").string();
    const auto rec = dir.file(algo + ".jsonl").string();
    const auto svg = dir.file(algo + ".svg").string();
    const auto csv = dir.file(algo + ".csv").string();
    std::vector<std::string> args{"run", circ, "--algo", algo, "--seed", "9", "-o", fp, "--record", rec,
                                  "--svg", svg, "--rudy-csv", csv, "--rudy-grid", "8"};
    if (algo == "sa") args.insert(args.end(), {"--sa-iters", "5", "--sa-cooling", "0.5"});
    const auto r = call(args);
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const auto c = std::make_shared<const Circuit>(load_circuit(circ));
    const auto state = floorplan_from_json(nlohmann::json::parse(read_text(fp)), c);
    CHECK(state.complete());
    const auto record = run_record_from_json(nlohmann::json::parse(read_text(rec)));
    CHECK(record.algo == algo);
    CHECK(record.seed == 9);
    CHECK(record.ds == doctest::Approx(100.0 * state.ds()));
    CHECK(count(read_text(svg), "class=\"module\"") == 8);
    CHECK(count(read_text(csv), "\n") == 8);
  }
}

TEST_CASE("evaluation configuration flags and the congestion variant") {
  TempDir dir;
  const auto circ = dir.file("c.json").string();
  REQUIRE(call({"gen", "--seed", "6", "-m", "6", "-o", circ}).code == 0);
  const auto rec = dir.file("r.jsonl").string();
  auto r = call({"run", "--algo", "bsrl", "--q", "5", "--epsilon", "0.7", "--beta", "10", circ, "-o",
                 dir.file("f.json").string(), "--record", rec});
  REQUIRE(r.code == 0);
  auto record = run_record_from_json(nlohmann::json::parse(read_text(rec)));
  CHECK(record.params["q"] == 5);
  CHECK(record.params["beta"] == 10);
  CHECK(record.params["congestion_threshold"] == "inf");

  r = call({"run", circ, "--congestion-threshold", "0.1", "--alpha", "1", "--delta", "1000", "-o",
            dir.file("f.json").string(), "--record", rec});
  REQUIRE(r.code == 0);
  record = run_record_from_json(nlohmann::json::parse(read_text(rec)));
  CHECK(record.params["congestion_threshold"] == 0.1);
  CHECK(record.params["delta"] == 1000.0);
}

TEST_CASE("invalid flags fail with a message naming the flag") {
  TempDir dir;
  const auto circ = dir.file("c.json").string();
  REQUIRE(call({"gen", "-m", "4", "-o", circ}).code == 0);
  const std::vector<std::pair<std::vector<std::string>, std::string>> cases{
      {{"run", circ, "--q", "0"}, "--q"},
      {{"run", circ, "--epsilon", "1.5"}, "--epsilon"},
      {{"run", circ, "--beta", "0"}, "--beta"},
      {{"run", circ, "--congestion-threshold", "hot"}, "--congestion-threshold"},
      {{"run", circ, "--gamma", "2"}, "--gamma"},
      {{"run", circ, "--temperature", "0"}, "--temperature"},
      {{"run", circ, "--algo", "dfs"}, "--algo"},
      {{"run", circ, "--sa-cooling", "1.5"}, "--sa-cooling"},
      {{"bench", "--algos", "greedy,magic"}, "--algos"},
      {{"bench", "--repeats", "0"}, "--repeats"},
  };
  for (const auto& [args, flag] : cases) {
    const auto r = call(args);
    CHECK(r.code != 0);
    CHECK_MESSAGE(r.err.find(flag) != std::string::npos, r.err);
  }
  CHECK(call({"run", dir.file("missing.json").string()}).code == 1);
  CHECK(call({"frobnicate"}).code != 0);
}

TEST_CASE("config file supplies defaults, flags win") {
  TempDir dir;
  const auto circ = dir.file("c.json").string();
  REQUIRE(call({"gen", "-m", "5", "-o", circ}).code == 0);
  const auto cfg = dir.file("cfg.json").string();
  write_text(cfg, R"({"q": 3, "beta": 4, "seed": 17, "omega2": 2.5})");
  const auto rec = dir.file("r.jsonl").string();
  REQUIRE(call({"run", circ, "--config", cfg, "--beta", "6", "-o", dir.file("f.json").string(), "--record", rec})
              .code == 0);
  const auto record = run_record_from_json(nlohmann::json::parse(read_text(rec)));
  CHECK(record.params["q"] == 3);
  CHECK(record.params["beta"] == 6);
  CHECK(record.seed == 17);
  CHECK(record.params["reward"]["omega2"] == 2.5);
}

TEST_CASE("infeasible search exits with code 2") {
  TempDir dir;
  const auto circ = dir.file("bad.json").string();
  write_text(circ, R"({"modules": [{"id": 0, "w": 2, "h": 2}, {"id": 1, "w": 1.5, "h": 1.5}, {"id": 2, "w": 1, "h": 1}],
    "alignments": [{"a": 0, "b": 2, "axis": "v"}, {"a": 1, "b": 2, "axis": "v"}]})");
  const auto r = call({"run", circ, "-o", dir.file("f.json").string(), "--record", dir.file("r.jsonl").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("infeasible") != std::string::npos);
}

TEST_CASE("bench writes records and a table") {
  TempDir dir;
  const auto jsonl = dir.file("b.jsonl").string();
  const auto table = dir.file("t.md").string();
  const auto r = call({"bench", "--algos", "greedy,bsrl,bsrl-dagger", "--repeats", "2", "--gen-count", "2",
                       "--gen-modules", "5", "--bootstrap", "100", "--no-timing", "--jsonl", jsonl, "--table", table});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(count(read_text(jsonl), "\n") == 2 * 3 * 2);
  const auto t = read_text(table);
  CHECK(t.find("bsrl-dagger") != std::string::npos);
  CHECK(r.out.find("| Circuit |") != std::string::npos);

  const auto jsonl2 = dir.file("b2.jsonl").string();
  REQUIRE(call({"bench", "--algos", "greedy,bsrl,bsrl-dagger", "--repeats", "2", "--gen-count", "2",
                "--gen-modules", "5", "--bootstrap", "100", "--no-timing", "--jsonl", jsonl2})
              .code == 0);
  CHECK(read_text(jsonl) == read_text(jsonl2));
}

TEST_CASE("render") {
  TempDir dir;
  const auto circ = dir.file("one.json").string();
  write_text(circ, R"({"modules": [{"id": 0, "w": 3, "h": 2}]})");
  const auto fp = dir.file("fp.json").string();
  write_text(fp, R"({"0": {"x": 0, "y": 0}})");
  const auto svg = dir.file("one.svg").string();
  REQUIRE(call({"render", fp, circ, "-o", svg}).code == 0);
  CHECK(count(read_text(svg), "<rect") == 1);

  const auto svg2 = dir.file("two.svg").string();
  REQUIRE(call({"render", fp, circ, "-o", svg2}).code == 0);
  CHECK(read_text(svg) == read_text(svg2));

  write_text(fp, R"({"0": {"x": 0, "y": 0}, "4": {"x": 5, "y": 0}})");
  const auto r = call({"render", fp, circ, "-o", svg});
  CHECK(r.code == 1);
  CHECK(r.err.find("4") != std::string::npos);
}

TEST_CASE("overlay hotspot matches the congestion grid") {
  TempDir dir;
  // A wide net and a short net stacked inside it.
  const auto circ = dir.file("c.json").string();
  write_text(circ, R"({"modules": [{"id": 0, "w": 1, "h": 1}, {"id": 1, "w": 1, "h": 1},
    {"id": 2, "w": 1, "h": 1}, {"id": 3, "w": 1, "h": 1}],
    "nets": [{"id": 0, "members": [0, 1]}, {"id": 1, "members": [2, 3]}]})");
  const auto fp = dir.file("fp.json").string();
  write_text(fp, R"({"0": {"x": 0, "y": 0}, "1": {"x": 9, "y": 9}, "2": {"x": 3, "y": 4}, "3": {"x": 5, "y": 5}})");
  const auto svg = dir.file("o.svg").string();
  REQUIRE(call({"render", fp, circ, "-o", svg, "--congestion-overlay", "--show-nets", "--rudy-grid", "10"}).code == 0);
  const auto text = read_text(svg);
  CHECK(count(text, "class=\"net\"") >= 2);

  const std::regex cell(R"re(data-row="(\d+)" data-col="(\d+)"[^>]*fill-opacity="([0-9.e+-]+)")re");
  double hottest = -1;
  std::set<std::pair<int, int>> hot;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), cell); it != std::sregex_iterator(); ++it) {
    const double o = std::stod((*it)[3]);
    const std::pair<int, int> rc{std::stoi((*it)[1]), std::stoi((*it)[2])};
    if (o > hottest + 1e-9) {
      hottest = o;
      hot = {rc};
    } else if (std::abs(o - hottest) <= 1e-9) {
      hot.insert(rc);
    }
  }
  REQUIRE(!hot.empty());

  const auto c = std::make_shared<const Circuit>(load_circuit(circ));
  const auto grid = rudy_grid(floorplan_from_json(nlohmann::json::parse(read_text(fp)), c), 10);
  std::set<std::pair<int, int>> argmax;
  for (int r = 0; r < 10; ++r) {
    for (int col = 0; col < 10; ++col) {
      if (grid.cells(r, col) >= grid.cells.maxCoeff() - 1e-12) argmax.insert({r, col});
    }
  }
  CHECK(hot == argmax);
}

TEST_CASE("installed binary") {
  TempDir dir;
  const std::string bin = BSFP_CLI_PATH;
  const auto circ = dir.file("c.json").string();
  CHECK(std::system((bin + " gen -m 3 -o " + circ + " > /dev/null").c_str()) == 0);
  CHECK(std::system((bin + " --help > /dev/null").c_str()) == 0);
  CHECK(std::system((bin + " run " + circ + " --q 0 > /dev/null 2>&1").c_str()) != 0);
}
