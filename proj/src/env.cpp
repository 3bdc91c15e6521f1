#include "bsfp/env.hpp"

#include <cmath>
#include <numeric>

#include "bsfp/error.hpp"

namespace bsfp {

void RewardConfig::validate() const {
  if (omega1 < 0.0 || omega2 < 0.0 || omega3 < 0.0) throw ValidationError("--omega1, --omega2 and --omega3 must be non-negative");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ValidationError("--gamma must be in (0, 1]");
  if (target_ar && !(*target_ar > 0.0)) throw ValidationError("--target-ar must be positive");
}

nlohmann::json RewardConfig::to_json() const {
  nlohmann::json j = {{"omega1", omega1}, {"omega2", omega2},   {"omega3", omega3},
                      {"gamma", gamma},   {"penalty", penalty}, {"normalize_step_hpwl", normalize_step_hpwl}};
  if (target_ar) j["target_ar"] = *target_ar;
  return j;
}

double hpwl_min_estimate(const Circuit& c) {
  double total = 0.0;
  for (const auto& n : c.nets) {
    double area = 0.0;
    for (auto id : n.members) area += c.module(id).area();
    total += 2.0 * std::sqrt(area);
  }
  return std::max(total, 1e-6);
}

std::optional<double> effective_target_ar(const Circuit& c, const RewardConfig& cfg) {
  return cfg.target_ar ? cfg.target_ar : c.target_ar;
}

double terminal_reward(const PlacementState& s, const RewardConfig& cfg, double hpwl_min) {
  if (!s.complete()) throw IncompletePlacementError("terminal reward needs every module placed");
  double r = -cfg.omega1 / (1.0 - s.ds()) - cfg.omega2 * s.hpwl() / hpwl_min;
  if (auto ar = effective_target_ar(s.circuit(), cfg)) r -= cfg.omega3 * std::abs(*ar - aspect_ratio(s));
  return r;
}

double episode_return(std::span<const double> rewards, double gamma) {
  double g = 0.0, w = 1.0;
  for (double r : rewards) {
    g += w * r;
    w *= gamma;
  }
  return g;
}

double floorplan_return(const PlacementState& s, const RewardConfig& cfg, double hpwl_min) {
  const double hpwl_term = cfg.normalize_step_hpwl ? s.hpwl() / hpwl_min : s.hpwl();
  return -(s.ds() + hpwl_term) + terminal_reward(s, cfg, hpwl_min);
}

double step_reward(const StepDelta& d, const RewardConfig& cfg, double hpwl_min) {
  return -(d.d_ds + (cfg.normalize_step_hpwl ? d.d_hpwl / hpwl_min : d.d_hpwl));
}

Episode::Episode(std::shared_ptr<const Circuit> circuit, std::vector<ModuleId> order)
    : state_(circuit), order_(std::make_shared<const std::vector<ModuleId>>(std::move(order))),
      hpwl_min_(hpwl_min_estimate(*circuit)) {
  if (order_->size() != circuit->size()) throw ValidationError("placement order must list every module once");
  std::vector<bool> seen(circuit->size(), false);
  for (auto id : *order_) {
    if (id < 0 || static_cast<std::size_t>(id) >= circuit->size() || seen[static_cast<std::size_t>(id)]) {
      throw ValidationError("placement order is not a permutation");
    }
    seen[static_cast<std::size_t>(id)] = true;
  }
  rewards_.reserve(circuit->size());
}

Episode::Episode(std::shared_ptr<const Circuit> circuit) : Episode(circuit, placement_order(*circuit)) {}

ModuleId Episode::next_module() const {
  if (done()) throw SequenceError("episode is over");
  return (*order_)[t_];
}

StepResult step(const Episode& e, const Action& a, const RewardConfig& cfg) {
  const ModuleId expected = e.next_module();
  if (a.module != expected) {
    throw SequenceError("action places module " + std::to_string(a.module) + " but module " +
                        std::to_string(expected) + " is next");
  }
  StepResult res{e, 0.0, false, false, {}};
  auto& next = res.episode;
  try {
    auto [s, d] = place(e.state_, a.module, a.x, a.y);
    if (!alignment_satisfied(s, a.module)) throw OverlapError("alignment violated");
    next.state_ = std::move(s);
    res.delta = d;
  } catch (const OverlapError&) {
    next.violated_ = true;
    next.rewards_.push_back(cfg.penalty);
    res.reward = cfg.penalty;
    res.terminal = true;
    res.violated = true;
    return res;
  }
  ++next.t_;
  double r = step_reward(res.delta, cfg, e.hpwl_min_);
  if (next.t_ == next.order_->size()) {
    r += terminal_reward(next.state_, cfg, e.hpwl_min_);
    res.terminal = true;
  }
  next.rewards_.push_back(r);
  res.reward = r;
  return res;
}

}  // namespace bsfp
