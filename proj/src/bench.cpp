#include "bsfp/bench.hpp"

#include <atomic>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

#include "bsfp/error.hpp"

namespace bsfp {

using nlohmann::json;

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or_nan(const json& j, const char* key) {
  return j.contains(key) && j.at(key).is_number() ? j.at(key).get<double>() : std::nan("");
}

}  // namespace

json to_json(const RunRecord& r) {
  json j;
  j["algo"] = r.algo;
  j["circuit"] = r.circuit;
  j["runtime_s"] = number_or_null(r.runtime_s);
  j["ds"] = number_or_null(r.ds);
  j["hpwl"] = number_or_null(r.hpwl);
  j["rudy"] = number_or_null(r.rudy);
  j["reward"] = number_or_null(r.reward);
  j["seed"] = r.seed;
  j["congestion_fallbacks"] = r.congestion_fallbacks;
  j["feasible"] = r.feasible;
  if (!r.error.empty()) j["error"] = r.error;
  j["params"] = r.params;
  return j;
}

RunRecord run_record_from_json(const json& j) {
  RunRecord r;
  r.algo = j.at("algo").get<std::string>();
  r.circuit = j.at("circuit").get<std::string>();
  r.runtime_s = number_or_nan(j, "runtime_s");
  r.ds = number_or_nan(j, "ds");
  r.hpwl = number_or_nan(j, "hpwl");
  r.rudy = number_or_nan(j, "rudy");
  r.reward = number_or_nan(j, "reward");
  r.seed = j.at("seed").get<std::uint64_t>();
  r.congestion_fallbacks = j.value("congestion_fallbacks", std::size_t{0});
  r.feasible = j.value("feasible", true);
  r.error = j.value("error", std::string{});
  r.params = j.value("params", json::object());
  return r;
}

const char* metric_label(Metric m) {
  switch (m) {
    case Metric::Runtime: return "Runtime (s)";
    case Metric::DS: return "DS (%)";
    case Metric::HPWL: return "HPWL (um)";
    case Metric::RUDY: return "RUDY";
    case Metric::Reward: return "R";
  }
  return "?";
}

double metric_value(const RunRecord& r, Metric m) {
  switch (m) {
    case Metric::Runtime: return r.runtime_s;
    case Metric::DS: return r.ds;
    case Metric::HPWL: return r.hpwl;
    case Metric::RUDY: return r.rudy;
    case Metric::Reward: return r.reward;
  }
  return std::nan("");
}

double improvement(Metric m, double baseline, double candidate) {
  switch (m) {
    case Metric::DS: return baseline - candidate;
    case Metric::HPWL:
    case Metric::RUDY:
    case Metric::Reward: return baseline == 0.0 ? std::nan("") : 100.0 * (baseline - candidate) / baseline;
    case Metric::Runtime: break;
  }
  return std::nan("");
}

RunRecord run_one(const NamedCircuit& c, const AlgoSpec& algo, std::uint64_t seed, const RewardConfig& cfg) {
  RunRecord rec;
  try {
    if (algo.kind == AlgoKind::Sa) {
      SaParams sp = algo.sa;
      sp.seed = seed;
      rec = anneal(c.circuit, sp, cfg).record;
    } else {
      SearchParams p = algo.search;
      p.seed = seed;
      if (algo.kind == AlgoKind::Greedy) p.q = 1;
      rec = search(c.circuit, algo.policy, p, cfg).record;
    }
  } catch (const InfeasibleError& e) {
    rec = RunRecord{};
    rec.feasible = false;
    rec.error = e.what();
    rec.seed = seed;
    rec.ds = rec.hpwl = rec.rudy = rec.reward = std::nan("");
  }
  rec.algo = algo.name;
  rec.circuit = c.name;
  return rec;
}

const StatSummary* SuiteReport::find(const std::string& circuit, const std::string& algo, Metric m) const {
  for (const auto& row : summaries) {
    if (row.circuit == circuit && row.algo == algo && row.metric == m) return &row.stats;
  }
  return nullptr;
}

SuiteReport run_suite(const std::vector<NamedCircuit>& circuits, const std::vector<AlgoSpec>& algos,
                      const SuiteOptions& opt) {
  if (opt.repeats < 1) throw ValidationError("--repeats must be >= 1");
  if (algos.empty()) throw ValidationError("at least one algorithm is required");
  SuiteReport report;
  for (const auto& c : circuits) report.circuits.push_back(c.name);
  for (const auto& a : algos) report.algos.push_back(a.name);
  report.baseline = opt.baseline.empty() ? algos.front().name : opt.baseline;
  if (std::find(report.algos.begin(), report.algos.end(), report.baseline) == report.algos.end()) {
    throw ValidationError("baseline '" + report.baseline + "' is not among the algorithms");
  }

  const auto reps = static_cast<std::size_t>(opt.repeats);
  const std::size_t total = circuits.size() * algos.size() * reps;
  report.records.resize(total);
  auto run_index = [&](std::size_t i) {
    const std::size_t r = i % reps;
    const std::size_t a = (i / reps) % algos.size();
    const std::size_t c = i / (reps * algos.size());
    auto rec = run_one(circuits[c], algos[a], opt.base_seed + r, opt.reward);
    if (!opt.timing) rec.runtime_s = 0.0;
    report.records[i] = std::move(rec);
  };
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, opt.workers)), total);
  if (workers <= 1) {
    for (std::size_t i = 0; i < total; ++i) run_index(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i; (i = next.fetch_add(1)) < total;) run_index(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::uint64_t stat_seed = mix64(opt.base_seed);
  for (std::size_t c = 0; c < circuits.size(); ++c) {
    for (std::size_t a = 0; a < algos.size(); ++a) {
      for (Metric m : kMetrics) {
        std::vector<double> xs;
        for (std::size_t r = 0; r < reps; ++r) {
          const auto& rec = report.records[(c * algos.size() + a) * reps + r];
          if (rec.feasible) xs.push_back(metric_value(rec, m));
        }
        stat_seed = mix64(stat_seed);
        if (xs.empty()) continue;
        report.summaries.push_back(
            {circuits[c].name, algos[a].name, m, summarize(xs, opt.bootstrap_resamples, opt.alpha, stat_seed)});
      }
    }
  }
  return report;
}

std::string format_table(const SuiteReport& report) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "| Circuit | Metric |";
  for (const auto& a : report.algos) os << ' ' << a << " |";
  os << "\n|---|---|";
  for (std::size_t i = 0; i < report.algos.size(); ++i) os << "---|";
  os << '\n';
  for (const auto& c : report.circuits) {
    for (Metric m : kMetrics) {
      os << "| " << c << " | " << metric_label(m) << " |";
      const StatSummary* base = report.find(c, report.baseline, m);
      for (const auto& a : report.algos) {
        const StatSummary* s = report.find(c, a, m);
        if (!s) {
          os << " n/a |";
          continue;
        }
        os << ' ' << s->iqm << " ± " << s->iqr;
        if (a != report.baseline && base) {
          const double imp = improvement(m, base->iqm, s->iqm);
          if (std::isfinite(imp)) os << " (" << imp << (m == Metric::DS ? " pts" : "%") << ')';
        }
        os << " |";
      }
      os << '\n';
    }
  }
  os << "\nImprovements are relative to " << report.baseline
     << "; DS in percentage points (baseline - candidate), HPWL/RUDY/R relative (baseline - candidate) / baseline.\n";
  return os.str();
}

std::string to_jsonl(const std::vector<RunRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += to_json(r).dump();
    out += '\n';
  }
  return out;
}

}  // namespace bsfp
