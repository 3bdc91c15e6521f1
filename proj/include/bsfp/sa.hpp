#pragma once

#include <memory>
#include <vector>

#include <json.hpp>

#include "bsfp/congestion.hpp"
#include "bsfp/env.hpp"
#include "bsfp/run_record.hpp"

namespace bsfp {

/// Sequence pair. Module b lies right of a when a precedes b in both
/// sequences; b lies above a when a precedes b in `plus` and b precedes a in
/// `minus`.
struct SeqPair {
  std::vector<ModuleId> plus;
  std::vector<ModuleId> minus;

  static SeqPair identity(std::size_t m);
};

struct SaParams {
  double t0 = 100.0;
  double cooling = 0.95;
  int iters_per_temp = 0;  // 0 means 50 * m
  double t_min = 0.01;
  std::uint64_t seed = 0;
  RudyOptions rudy;  // for the reported congestion figure

  void validate() const;
  nlohmann::json to_json() const;
};

/// Longest-path packing toward the origin. Never overlaps.
PlacementState decode(const SeqPair& sp, std::shared_ptr<const Circuit> circuit);

/// -terminal_reward plus |penalty| per violated alignment.
double sa_cost(const PlacementState& s, const RewardConfig& cfg, double hpwl_min);

struct SaResult {
  PlacementState state;
  SeqPair best;
  double best_cost = 0.0;
  RunRecord record;
  std::vector<double> best_cost_trace;  // best-seen cost after each temperature step
};

/// Metropolis annealing over sequence pairs; returns the best state seen.
SaResult anneal(std::shared_ptr<const Circuit> circuit, const SaParams& params, const RewardConfig& cfg);

}  // namespace bsfp
