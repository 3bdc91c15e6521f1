#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bsfp/bsrl.hpp"
#include "bsfp/run_record.hpp"
#include "bsfp/sa.hpp"
#include "bsfp/stats.hpp"

namespace bsfp {

enum class AlgoKind { Bsrl, Greedy, Sa };

/// A named algorithm configuration. Greedy is the search with q = 1.
struct AlgoSpec {
  std::string name;
  AlgoKind kind = AlgoKind::Bsrl;
  SearchParams search;
  PolicyConfig policy;
  SaParams sa;
};

struct NamedCircuit {
  std::string name;
  std::shared_ptr<const Circuit> circuit;
};

enum class Metric { Runtime, DS, HPWL, RUDY, Reward };

inline constexpr Metric kMetrics[] = {Metric::Runtime, Metric::DS, Metric::HPWL, Metric::RUDY, Metric::Reward};

const char* metric_label(Metric m);
double metric_value(const RunRecord& r, Metric m);

/// Improvement of `candidate` over `baseline` in percent. DS (already a
/// percentage) uses the difference in points; HPWL, RUDY and R use the
/// relative change (baseline - candidate) / baseline. NaN for runtime.
double improvement(Metric m, double baseline, double candidate);

/// Runs one algorithm once with `seed`; a search that finds no feasible leaf
/// yields a record with feasible == false instead of throwing.
RunRecord run_one(const NamedCircuit& c, const AlgoSpec& algo, std::uint64_t seed, const RewardConfig& cfg);

struct SuiteOptions {
  int repeats = 100;
  std::uint64_t base_seed = 0;
  bool timing = true;  // false zeroes runtime_s so output is byte-reproducible
  std::size_t bootstrap_resamples = 10000;
  double alpha = 1e-5;
  int workers = 1;
  std::string baseline;  // algo name; defaults to the first algo
  RewardConfig reward;
};

struct SummaryRow {
  std::string circuit;
  std::string algo;
  Metric metric;
  StatSummary stats;
};

struct SuiteReport {
  std::vector<std::string> circuits;
  std::vector<std::string> algos;
  std::string baseline;
  std::vector<RunRecord> records;  // circuit-major, then algo, then repeat
  std::vector<SummaryRow> summaries;

  const StatSummary* find(const std::string& circuit, const std::string& algo, Metric m) const;
};

/// Repeat r of every (circuit, algo) uses seed base_seed + r.
SuiteReport run_suite(const std::vector<NamedCircuit>& circuits, const std::vector<AlgoSpec>& algos,
                      const SuiteOptions& opt);

/// Markdown table: one row per (circuit, metric), "IQM ± IQR (improvement)".
std::string format_table(const SuiteReport& report);

std::string to_jsonl(const std::vector<RunRecord>& records);

}  // namespace bsfp
