#include "bsfp/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bsfp/error.hpp"

namespace bsfp::cli {

namespace fs = std::filesystem;

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("failed writing " + path);
}

double parse_threshold(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (t == "inf" || t == "infinity") return kInf;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError("--congestion-threshold: expected a number or 'inf', got '" + text + "'");
}

RudyAggregate parse_aggregate(const std::string& text) {
  if (text == "max") return RudyAggregate::Max;
  if (text == "mean") return RudyAggregate::Mean;
  throw ValidationError("--rudy-aggregate must be 'max' or 'mean'");
}

std::shared_ptr<const Circuit> load_shared(const std::string& path) {
  return std::make_shared<const Circuit>(load_circuit(path));
}

void validate_render(const RenderOptions& r) {
  if (!(r.scale > 0.0)) throw ValidationError("--scale must be positive");
  if (r.rudy.grid < 1) throw ValidationError("--rudy-grid must be >= 1");
  if (!(r.rudy.wire_width > 0.0)) throw ValidationError("--wire-width must be positive");
}

}  // namespace

std::vector<AlgoSpec> make_algos(const BenchConfig& cfg) {
  std::vector<AlgoSpec> out;
  for (const auto& name : cfg.algos) {
    AlgoSpec a{name, AlgoKind::Bsrl, cfg.search, cfg.policy, cfg.sa};
    if (name == "greedy") {
      a.kind = AlgoKind::Greedy;
      a.search.q = 1;
    } else if (name == "bsrl") {
    } else if (name == "bsrl-dagger") {
      a.search.congestion_threshold = cfg.dagger_threshold;
    } else if (name == "sa") {
      a.kind = AlgoKind::Sa;
    } else {
      throw ValidationError("--algos: unknown algorithm '" + name + "' (expected greedy, bsrl, bsrl-dagger, sa)");
    }
    out.push_back(std::move(a));
  }
  return out;
}

int cmd_gen(const GenConfig& cfg, std::ostream& out) {
  const Circuit c = gen_circuit(cfg.seed, cfg.modules, cfg.net_density, cfg.alignments);
  save_circuit(c, cfg.out);
  out << "wrote " << cfg.out << " (" << c.size() << " modules, " << c.nets.size() << " nets, " << c.alignments.size()
      << " alignments)\n";
  return 0;
}

int cmd_run(const RunConfig& cfg, std::ostream& out) {
  if (cfg.algo != "bsrl" && cfg.algo != "greedy" && cfg.algo != "sa") {
    throw ValidationError("--algo must be bsrl, greedy or sa");
  }
  SearchParams sp = cfg.search;
  if (cfg.algo == "greedy") sp.q = 1;
  sp.validate();
  cfg.sa.validate();
  cfg.reward.validate();
  validate_render(cfg.render);
  if (!(cfg.policy.temperature > 0.0)) throw ValidationError("--temperature must be positive");

  const auto circuit = load_shared(cfg.circuit);
  PlacementState state;
  RunRecord rec;
  if (cfg.algo == "sa") {
    auto res = anneal(circuit, cfg.sa, cfg.reward);
    state = res.state;
    rec = res.record;
  } else {
    auto res = search(circuit, cfg.policy, sp, cfg.reward);
    state = res.state;
    rec = res.record;
    rec.algo = cfg.algo;
  }
  rec.circuit = fs::path(cfg.circuit).stem().string();

  write_file(cfg.out_floorplan, floorplan_to_json(state).dump(2) + "\n");
  write_file(cfg.out_record, to_json(rec).dump() + "\n");
  if (!cfg.out_svg.empty()) write_file(cfg.out_svg, render_svg(state, cfg.render));
  if (!cfg.rudy_csv.empty()) write_file(cfg.rudy_csv, to_csv(rudy_grid(state, sp.rudy.grid, sp.rudy.wire_width)));
  out << rec.algo << " " << rec.circuit << ": DS " << rec.ds << "%, HPWL " << rec.hpwl << ", RUDY " << rec.rudy
      << ", R " << rec.reward << ", " << rec.runtime_s << " s\n";
  return 0;
}

int cmd_bench(const BenchConfig& cfg, std::ostream& out) {
  cfg.search.validate();
  cfg.sa.validate();
  cfg.suite.reward.validate();
  if (!(cfg.dagger_threshold > 0.0)) throw ValidationError("--dagger-threshold must be positive");
  if (cfg.suite.repeats < 1) throw ValidationError("--repeats must be >= 1");
  if (cfg.circuits.empty() && (cfg.gen_count < 1 || cfg.gen_modules < 1)) {
    throw ValidationError("--gen-count and --gen-modules must be >= 1");
  }
  const auto algos = make_algos(cfg);

  std::vector<NamedCircuit> circuits;
  for (const auto& path : cfg.circuits) circuits.push_back({fs::path(path).stem().string(), load_shared(path)});
  if (circuits.empty()) {
    for (int i = 0; i < cfg.gen_count; ++i) {
      const auto seed = cfg.gen_seed + static_cast<std::uint64_t>(i);
      circuits.push_back({"synth-" + std::to_string(seed),
                          std::make_shared<const Circuit>(gen_circuit(seed, cfg.gen_modules, cfg.gen_density))});
    }
  }
  SuiteOptions opt = cfg.suite;
  if (opt.baseline.empty()) opt.baseline = algos.front().name;
  const auto report = run_suite(circuits, algos, opt);
  const auto table = format_table(report);
  write_file(cfg.out_jsonl, to_jsonl(report.records));
  if (!cfg.out_table.empty()) write_file(cfg.out_table, table);
  out << table;
  return 0;
}

int cmd_render(const RenderConfig& cfg, std::ostream& out) {
  validate_render(cfg.render);
  const auto circuit = load_shared(cfg.circuit);
  std::ifstream in(cfg.floorplan);
  if (!in) throw Error("cannot open floorplan file " + cfg.floorplan);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(cfg.floorplan + ": " + e.what());
  }
  const auto state = floorplan_from_json(j, circuit);
  write_file(cfg.out, render_svg(state, cfg.render));
  out << "wrote " << cfg.out << "\n";
  return 0;
}

namespace {

struct Shared {
  SearchParams search;
  PolicyConfig policy;
  SaParams sa;
  RewardConfig reward;
  std::string threshold = "inf";
  std::string aggregate = "max";
  std::optional<double> target_ar;
  bool raw_step_hpwl = false;
};

void add_search_flags(CLI::App& app, Shared& s) {
  auto& p = s.search;
  app.add_option("--q", p.q, "Tree arity");
  app.add_option("--epsilon", p.epsilon, "Per-level pruning probability");
  app.add_option("--beta", p.beta, "Beam width");
  app.add_option("--level-cap", p.level_cap, "Maximum level width before forced pruning");
  app.add_option("--alpha", p.alpha, "Area weight in node values");
  app.add_option("--delta", p.delta, "Wirelength weight in node values");
  app.add_option("--congestion-threshold", s.threshold, "RUDY threshold, or 'inf'");
  app.add_option("--resample-frac", p.resample_frac, "Fraction of q resampled on congestion");
  app.add_option("--seed", p.seed, "Random seed");
  app.add_option("--rudy-grid", p.rudy.grid, "RUDY grid resolution");
  app.add_option("--wire-width", p.rudy.wire_width, "Wire width for RUDY wire area");
  app.add_option("--rudy-aggregate", s.aggregate, "RUDY scalar: max or mean");
  app.add_option("--threads", p.threads, "Worker threads for level expansion");
  app.add_option("--policy", s.policy.name, "Placement policy");
  app.add_option("--temperature", s.policy.temperature, "Policy softmax temperature");
}

void add_reward_flags(CLI::App& app, Shared& s) {
  auto& r = s.reward;
  app.add_option("--omega1", r.omega1, "Area weight");
  app.add_option("--omega2", r.omega2, "Wirelength weight");
  app.add_option("--omega3", r.omega3, "Outline-error weight");
  app.add_option("--gamma", r.gamma, "Discount factor");
  app.add_option("--penalty", r.penalty, "Constraint-violation reward");
  app.add_option("--target-ar", s.target_ar, "Target aspect ratio");
  app.add_flag("--raw-step-hpwl", s.raw_step_hpwl, "Do not normalize the per-step HPWL delta");
}

void add_sa_flags(CLI::App& app, SaParams& sa) {
  app.add_option("--sa-t0", sa.t0, "Initial temperature");
  app.add_option("--sa-cooling", sa.cooling, "Cooling factor");
  app.add_option("--sa-iters", sa.iters_per_temp, "Iterations per temperature (0: 50 * m)");
  app.add_option("--sa-t-min", sa.t_min, "Stop temperature");
}

void add_render_flags(CLI::App& app, RenderOptions& r) {
  app.add_option("--scale", r.scale, "Pixels per length unit");
  app.add_flag("--show-nets", r.show_nets, "Draw net flylines");
  app.add_flag("--congestion-overlay", r.congestion_overlay, "Draw the RUDY heat map");
}

void finish(Shared& s) {
  s.search.congestion_threshold = parse_threshold(s.threshold);
  s.search.rudy.aggregate = parse_aggregate(s.aggregate);
  s.reward.target_ar = s.target_ar;
  s.reward.normalize_step_hpwl = !s.raw_step_hpwl;
  s.sa.rudy = s.search.rudy;
  s.sa.seed = s.search.seed;
}

/// Turns a JSON config object into flag tokens, skipping flags given explicitly.
std::vector<std::string> config_tokens(const std::string& path, const std::vector<std::string>& explicit_args) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError(path + ": config must be a JSON object");
  auto given = [&](const std::string& flag) {
    return std::any_of(explicit_args.begin(), explicit_args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
  };
  auto scalar = [](const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  std::vector<std::string> out;
  for (const auto& [key, val] : j.items()) {
    const std::string flag = "--" + key;
    if (key == "config" || given(flag)) continue;
    if (val.is_boolean()) {
      if (val.get<bool>()) out.push_back(flag);
    } else if (val.is_array()) {
      out.push_back(flag);
      for (const auto& e : val) out.push_back(scalar(e));
    } else if (!val.is_null()) {
      out.push_back(flag);
      out.push_back(scalar(val));
    }
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args = raw_args;
  try {
    const auto it = std::find(args.begin(), args.end(), "--config");
    if (it != args.end()) {
      if (it + 1 == args.end()) throw ValidationError("--config needs a file path");
      const std::string path = *(it + 1);
      args.erase(it, it + 2);
      auto tokens = config_tokens(path, args);
      // Config tokens go right after the subcommand so positionals stay in place.
      const auto pos = args.empty() ? args.end() : args.begin() + 1;
      args.insert(pos, tokens.begin(), tokens.end());
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  CLI::App app{"Beam-search floorplanner for analog block placement", "bsfp"};
  app.require_subcommand(1);

  GenConfig gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write a synthetic circuit");
  gen_cmd->add_option("--seed", gen.seed, "Generator seed");
  gen_cmd->add_option("--modules,-m", gen.modules, "Module count");
  gen_cmd->add_option("--net-density", gen.net_density, "Nets per module, in (0, 1]");
  gen_cmd->add_option("--alignments", gen.alignments, "Random alignment pairs");
  gen_cmd->add_option("--out,-o", gen.out, "Output circuit JSON");

  RunConfig runc;
  Shared run_shared;
  auto* run_cmd = app.add_subcommand("run", "Floorplan one circuit");
  run_cmd->add_option("circuit,--circuit", runc.circuit, "Circuit JSON")->required();
  run_cmd->add_option("--algo", runc.algo, "bsrl, greedy or sa");
  add_search_flags(*run_cmd, run_shared);
  add_reward_flags(*run_cmd, run_shared);
  add_sa_flags(*run_cmd, run_shared.sa);
  add_render_flags(*run_cmd, runc.render);
  run_cmd->add_option("--out,-o", runc.out_floorplan, "Floorplan JSON output");
  run_cmd->add_option("--record", runc.out_record, "RunRecord JSONL output");
  run_cmd->add_option("--svg", runc.out_svg, "SVG output");
  run_cmd->add_option("--rudy-csv", runc.rudy_csv, "RUDY grid CSV output");

  BenchConfig bench;
  Shared bench_shared;
  std::string bench_algos = "greedy,bsrl,bsrl-dagger,sa";
  auto* bench_cmd = app.add_subcommand("bench", "Repeated seeded runs with IQM/IQR/bootstrap statistics");
  bench_cmd->add_option("circuits,--circuits", bench.circuits, "Circuit JSON files (default: synthetic)");
  bench_cmd->add_option("--algos", bench_algos, "Comma-separated: greedy, bsrl, bsrl-dagger, sa");
  bench_cmd->add_option("--baseline", bench.suite.baseline, "Algorithm improvements are measured against");
  bench_cmd->add_option("--dagger-threshold", bench.dagger_threshold, "Congestion threshold of bsrl-dagger");
  bench_cmd->add_option("--repeats", bench.suite.repeats, "Runs per circuit and algorithm");
  bench_cmd->add_option("--base-seed", bench.suite.base_seed, "Seed of repeat 0");
  bench_cmd->add_option("--bootstrap", bench.suite.bootstrap_resamples, "Bootstrap resamples");
  bench_cmd->add_option("--ci-alpha", bench.suite.alpha, "Confidence-interval alpha");
  bench_cmd->add_option("--workers", bench.suite.workers, "Parallel runs");
  bool no_timing = false;
  bench_cmd->add_flag("--no-timing", no_timing, "Zero runtimes for byte-reproducible output");
  bench_cmd->add_option("--gen-count", bench.gen_count, "Synthetic circuits when none are given");
  bench_cmd->add_option("--gen-modules", bench.gen_modules, "Modules per synthetic circuit");
  bench_cmd->add_option("--gen-density", bench.gen_density, "Net density of synthetic circuits");
  bench_cmd->add_option("--gen-seed", bench.gen_seed, "Seed of the first synthetic circuit");
  bench_cmd->add_option("--jsonl", bench.out_jsonl, "RunRecord JSONL output");
  bench_cmd->add_option("--table", bench.out_table, "Markdown table output");
  add_search_flags(*bench_cmd, bench_shared);
  add_reward_flags(*bench_cmd, bench_shared);
  add_sa_flags(*bench_cmd, bench_shared.sa);

  RenderConfig rend;
  auto* render_cmd = app.add_subcommand("render", "Draw a floorplan as SVG");
  render_cmd->add_option("floorplan,--floorplan", rend.floorplan, "Floorplan JSON")->required();
  render_cmd->add_option("circuit,--circuit", rend.circuit, "Circuit JSON")->required();
  render_cmd->add_option("--out,-o", rend.out, "SVG output");
  render_cmd->add_option("--rudy-grid", rend.render.rudy.grid, "RUDY grid resolution");
  render_cmd->add_option("--wire-width", rend.render.rudy.wire_width, "Wire width for RUDY wire area");
  add_render_flags(*render_cmd, rend.render);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*gen_cmd) return cmd_gen(gen, out);
    if (*run_cmd) {
      finish(run_shared);
      runc.search = run_shared.search;
      runc.policy = run_shared.policy;
      runc.sa = run_shared.sa;
      runc.reward = run_shared.reward;
      runc.render.rudy = run_shared.search.rudy;
      return cmd_run(runc, out);
    }
    if (*bench_cmd) {
      finish(bench_shared);
      bench.search = bench_shared.search;
      bench.policy = bench_shared.policy;
      bench.sa = bench_shared.sa;
      bench.suite.reward = bench_shared.reward;
      bench.suite.timing = !no_timing;
      bench.algos.clear();
      std::stringstream ss(bench_algos);
      for (std::string name; std::getline(ss, name, ',');) {
        if (!name.empty()) bench.algos.push_back(name);
      }
      return cmd_bench(bench, out);
    }
    if (*render_cmd) return cmd_render(rend, out);
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace bsfp::cli
