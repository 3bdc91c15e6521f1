#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bsfp/bench.hpp"
#include "bsfp/render.hpp"

namespace bsfp::cli {

struct GenConfig {
  std::uint64_t seed = 0;
  int modules = 10;
  double net_density = 0.8;
  int alignments = 0;
  std::string out = "circuit.json";
};

struct RunConfig {
  std::string circuit;
  std::string algo = "bsrl";  // bsrl | greedy | sa
  SearchParams search;
  PolicyConfig policy;
  SaParams sa;
  RewardConfig reward;
  std::string out_floorplan = "floorplan.json";
  std::string out_record = "run.jsonl";
  std::string out_svg;
  std::string rudy_csv;
  RenderOptions render;
};

struct BenchConfig {
  std::vector<std::string> circuits;  // empty: synthetic circuits
  int gen_count = 5;
  int gen_modules = 10;
  double gen_density = 0.8;
  std::uint64_t gen_seed = 1;
  std::vector<std::string> algos = {"greedy", "bsrl", "bsrl-dagger", "sa"};
  double dagger_threshold = 0.1;
  SearchParams search;
  PolicyConfig policy;
  SaParams sa;
  SuiteOptions suite;
  std::string out_jsonl = "bench.jsonl";
  std::string out_table;
};

struct RenderConfig {
  std::string floorplan;
  std::string circuit;
  std::string out = "floorplan.svg";
  RenderOptions render;
};

/// Algorithm specs for names greedy, bsrl, bsrl-dagger (finite congestion
/// threshold) and sa.
std::vector<AlgoSpec> make_algos(const BenchConfig& cfg);

int cmd_gen(const GenConfig& cfg, std::ostream& out);
int cmd_run(const RunConfig& cfg, std::ostream& out);
int cmd_bench(const BenchConfig& cfg, std::ostream& out);
int cmd_render(const RenderConfig& cfg, std::ostream& out);

/// Entry point. `args` excludes the program name. A `--config file.json`
/// supplies defaults keyed by flag name; explicit flags win.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bsfp::cli
