#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "bsfp/placement.hpp"
#include "bsfp/policy.hpp"

namespace bsfp {

struct RewardConfig {
  double omega1 = 1.0;  // area
  double omega2 = 5.0;  // wirelength
  double omega3 = 5.0;  // outline error
  double gamma = 1.0;
  double penalty = -50.0;
  std::optional<double> target_ar;  // overrides the circuit's target when set
  bool normalize_step_hpwl = true;  // divide the per-step HPWL delta by HPWL_min

  void validate() const;
  nlohmann::json to_json() const;
};

/// Sum over nets of 2 * sqrt(total member area): the half perimeter of a square
/// holding the net's modules. Floored at 1e-6.
double hpwl_min_estimate(const Circuit& c);

/// Target aspect ratio in effect: the config's, else the circuit's.
std::optional<double> effective_target_ar(const Circuit& c, const RewardConfig& cfg);

/// -w1 / (1 - DS) - w2 * HPWL / HPWL_min - w3 * |Ar* - Ar|. The outline term is
/// dropped when no target is set. Throws IncompletePlacementError.
double terminal_reward(const PlacementState& s, const RewardConfig& cfg, double hpwl_min);

/// Sum_j gamma^j * r_j.
double episode_return(std::span<const double> rewards, double gamma);

/// Undiscounted return of a complete floorplan, as if it had been built step by
/// step: the intermediate rewards telescope to -(DS + HPWL / HPWL_min).
double floorplan_return(const PlacementState& s, const RewardConfig& cfg, double hpwl_min);

/// Per-step reward from a placement delta.
double step_reward(const StepDelta& d, const RewardConfig& cfg, double hpwl_min);

struct StepResult;

/// Immutable episode of the sequential placement MDP.
class Episode {
 public:
  Episode(std::shared_ptr<const Circuit> circuit, std::vector<ModuleId> order);
  /// Default placement order.
  explicit Episode(std::shared_ptr<const Circuit> circuit);

  const PlacementState& state() const { return state_; }
  const Circuit& circuit() const { return state_.circuit(); }
  std::size_t t() const { return t_; }
  bool done() const { return violated_ || t_ == order_->size(); }
  bool violated() const { return violated_; }
  ModuleId next_module() const;
  const std::vector<double>& rewards() const { return rewards_; }
  double hpwl_min() const { return hpwl_min_; }

  friend StepResult step(const Episode& e, const Action& a, const RewardConfig& cfg);

 private:
  PlacementState state_;
  std::shared_ptr<const std::vector<ModuleId>> order_;
  std::size_t t_ = 0;
  std::vector<double> rewards_;
  double hpwl_min_ = 1.0;
  bool violated_ = false;
};

struct StepResult {
  Episode episode;
  double reward = 0.0;
  bool terminal = false;
  bool violated = false;
  StepDelta delta;
};

/// One MDP transition. An overlapping or misaligned placement ends the episode
/// with the penalty reward. Throws SequenceError if `a` does not place the
/// expected module or the episode is already over.
StepResult step(const Episode& e, const Action& a, const RewardConfig& cfg);

}  // namespace bsfp
