#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "bsfp/placement.hpp"
#include "bsfp/rng.hpp"

namespace bsfp {

struct Action {
  ModuleId module = 0;
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Action&) const = default;
};

struct ScoredAction {
  Action action;
  double prob = 0.0;
  double score = 0.0;
};

/// Legal positions for `module` given the placed modules.
///
/// Empty state: the origin. Otherwise, for each placed module the eight
/// positions flush against one of its sides and aligned with one of that
/// side's corners, minus those that overlap. Alignment constraints binding
/// `module` to a placed partner keep only positions on the partner's center
/// line; if none survive, positions on that line are injected by sliding
/// away from the partner until free. The result is sorted by (x, y) and never
/// empty: (x_max, y_min) of the bounding box is the last-resort fallback.
std::vector<Action> candidates(const PlacementState& s, ModuleId module,
                               std::span<const AlignmentConstraint> alignments);

/// True if every alignment between `module` and an already placed partner
/// holds within kGeomTol.
bool alignment_satisfied(const PlacementState& s, ModuleId module);

/// Softmax over score(a) = -(dDS + dHPWL / hpwl_min) at the given temperature.
std::vector<ScoredAction> score_and_distribute(const PlacementState& s, std::span<const Action> acts,
                                               double temperature, double hpwl_min);

/// k distinct draws without replacement, each proportional to the remaining
/// probability mass, returned in draw order. If k >= size, all in input order.
std::vector<ScoredAction> sample(std::span<const ScoredAction> scored, std::size_t k, Rng& rng);

/// pi(a|s) for the next module. Implementations must be pure in (state, module).
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::vector<ScoredAction> distribution(const PlacementState& s, ModuleId module) const = 0;
  virtual std::string name() const = 0;
};

/// Heuristic stand-in for a trained agent: softmax of the negated one-step reward.
class GreedySoftmaxPolicy final : public Policy {
 public:
  GreedySoftmaxPolicy(double temperature, double hpwl_min);

  std::vector<ScoredAction> distribution(const PlacementState& s, ModuleId module) const override;
  std::string name() const override { return "greedy-softmax"; }
  double temperature() const { return temperature_; }

 private:
  double temperature_;
  double hpwl_min_;
};

/// Builds a policy by name; currently only "greedy-softmax".
std::unique_ptr<Policy> make_policy(const std::string& name, double temperature, double hpwl_min);

}  // namespace bsfp

namespace bsfp {

struct PolicyConfig {
  std::string name = "greedy-softmax";
  double temperature = 0.3;
};

}  // namespace bsfp
