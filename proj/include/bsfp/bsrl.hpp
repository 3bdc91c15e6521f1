#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include <json.hpp>

#include "bsfp/congestion.hpp"
#include "bsfp/env.hpp"
#include "bsfp/policy.hpp"
#include "bsfp/run_record.hpp"

namespace bsfp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct SearchParams {
  int q = 5;              // tree arity
  double epsilon = 0.7;   // per-level pruning probability
  int beta = 10;          // beam width
  std::size_t level_cap = 1000;
  double alpha = 1.0;     // area weight in node values
  double delta = 1.0;     // wirelength weight in node values
  double congestion_threshold = kInf;
  double resample_frac = 0.6;
  std::uint64_t seed = 0;
  RudyOptions rudy;
  int threads = 1;

  void validate() const;
  nlohmann::json to_json() const;
};

/// A node of the state tree. Nodes are shared, immutable once built.
struct SearchNode {
  Episode episode;
  double v = 0.0;  // -inf for constraint-violating leaves
  std::shared_ptr<const SearchNode> parent;
  int depth = 0;
  bool leaf = false;
  std::uint64_t key = 0;    // rng stream of this node, derived from its creation path
  std::uint64_t index = 0;  // creation order, tie-breaker in beam selection
  std::size_t fallbacks = 0;  // lowest-RUDY fallbacks along the path from the root
  double rudy = std::numeric_limits<double>::quiet_NaN();  // evaluated only under a finite threshold
};

using NodePtr = std::shared_ptr<const SearchNode>;

/// -alpha * dDS - delta * dHPWL, with dHPWL normalized as in the step reward.
double internal_value(const StepDelta& d, const SearchParams& p, const RewardConfig& cfg, double hpwl_min);

/// -alpha * w1 / (1 - DS) - delta * w2 * HPWL / HPWL_min.
double leaf_value(const PlacementState& s, const SearchParams& p, const RewardConfig& cfg, double hpwl_min);

/// An examined action with the congestion of its successor state.
struct CongestionCandidate {
  ScoredAction scored;
  double rudy = 0.0;
};

struct CongestionPick {
  std::vector<std::size_t> chosen;  // indices into originals ++ resampled
  bool fallback = false;            // lowest-RUDY filling was needed
};

/// Child selection once some sampled action exceeded the threshold: keep the
/// originals within it, fill free slots with the within-threshold resampled
/// actions of highest probability, then with the lowest-RUDY examined actions.
CongestionPick select_congestion_children(std::span<const CongestionCandidate> originals,
                                          std::span<const CongestionCandidate> resampled, std::size_t q,
                                          double threshold);

/// ceil(resample_frac * q) fresh draws from `distribution`, excluding every
/// action in `originals`.
std::vector<ScoredAction> resample_for_congestion(std::span<const ScoredAction> distribution,
                                                  std::span<const CongestionCandidate> originals,
                                                  const SearchParams& p, Rng& rng);

struct Expansion {
  std::vector<SearchNode> children;  // index left at 0; assigned by the caller
  bool resampled = false;
  bool fallback = false;
};

/// Samples q actions for `node` from its own rng stream and builds the children.
Expansion expand_node(const NodePtr& node, const Policy& policy, const SearchParams& p, const RewardConfig& cfg);

/// With probability epsilon (one draw per level), or always when the level
/// exceeds level_cap, keep the beta highest-v nodes. Output sorted by v
/// descending, ties by creation index.
std::vector<NodePtr> prune_level(std::vector<NodePtr> level, const SearchParams& p, Rng& rng);

/// Rng driving the prune decision of tree level `depth`.
Rng level_rng(std::uint64_t seed, int depth);

struct SearchStats {
  std::size_t nodes_created = 0;
  std::size_t levels = 0;
  std::size_t prunes = 0;
  std::size_t max_level_width = 0;
  std::size_t resample_events = 0;
  std::size_t fallback_events = 0;
  std::vector<std::size_t> level_widths;  // after pruning
};

struct SearchResult {
  NodePtr best;
  PlacementState state;
  double value = 0.0;
  RunRecord record;
  SearchStats stats;
};

/// Builds the tree level by level and returns the highest-value leaf.
/// Throws InfeasibleError when every leaf violated a constraint.
SearchResult search(std::shared_ptr<const Circuit> circuit, const Policy& policy, const SearchParams& p,
                    const RewardConfig& cfg);
SearchResult search(std::shared_ptr<const Circuit> circuit, const PolicyConfig& pc, const SearchParams& p,
                    const RewardConfig& cfg);

/// Single policy rollout drawing one action per step from the same per-node
/// streams search() uses for slot 0.
struct RolloutResult {
  Episode episode;
  double value = 0.0;
};
RolloutResult greedy_rollout(std::shared_ptr<const Circuit> circuit, const Policy& policy, const RewardConfig& cfg,
                             const SearchParams& p);

}  // namespace bsfp
