#include "bsfp/bsrl.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <thread>

#include "bsfp/error.hpp"

namespace bsfp {

void SearchParams::validate() const {
  if (q < 1) throw ValidationError("--q must be >= 1");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ValidationError("--epsilon must be in [0, 1]");
  if (beta < 1) throw ValidationError("--beta must be >= 1");
  if (level_cap < 1) throw ValidationError("--level-cap must be >= 1");
  if (alpha < 0.0 || delta < 0.0) throw ValidationError("--alpha and --delta must be non-negative");
  if (!(congestion_threshold > 0.0)) throw ValidationError("--congestion-threshold must be positive");
  if (!(resample_frac > 0.0 && resample_frac <= 1.0)) throw ValidationError("--resample-frac must be in (0, 1]");
  if (rudy.grid < 1) throw ValidationError("--rudy-grid must be >= 1");
  if (!(rudy.wire_width > 0.0)) throw ValidationError("--wire-width must be positive");
  if (threads < 1) throw ValidationError("--threads must be >= 1");
}

nlohmann::json SearchParams::to_json() const {
  return {{"q", q},
          {"epsilon", epsilon},
          {"beta", beta},
          {"level_cap", level_cap},
          {"alpha", alpha},
          {"delta", delta},
          {"congestion_threshold", std::isinf(congestion_threshold) ? nlohmann::json("inf")
                                                                     : nlohmann::json(congestion_threshold)},
          {"resample_frac", resample_frac},
          {"seed", seed},
          {"rudy_grid", rudy.grid},
          {"wire_width", rudy.wire_width},
          {"rudy_aggregate", rudy.aggregate == RudyAggregate::Max ? "max" : "mean"}};
}

double internal_value(const StepDelta& d, const SearchParams& p, const RewardConfig& cfg, double hpwl_min) {
  const double dh = cfg.normalize_step_hpwl ? d.d_hpwl / hpwl_min : d.d_hpwl;
  return -p.alpha * d.d_ds - p.delta * dh;
}

double leaf_value(const PlacementState& s, const SearchParams& p, const RewardConfig& cfg, double hpwl_min) {
  return -p.alpha * cfg.omega1 / (1.0 - s.ds()) - p.delta * cfg.omega2 * s.hpwl() / hpwl_min;
}

CongestionPick select_congestion_children(std::span<const CongestionCandidate> originals,
                                          std::span<const CongestionCandidate> resampled, std::size_t q,
                                          double threshold) {
  CongestionPick pick;
  const std::size_t n_orig = originals.size();
  const std::size_t total = n_orig + resampled.size();
  auto at = [&](std::size_t i) -> const CongestionCandidate& {
    return i < n_orig ? originals[i] : resampled[i - n_orig];
  };
  std::vector<bool> taken(total, false);
  auto take = [&](std::size_t i) {
    pick.chosen.push_back(i);
    taken[i] = true;
  };

  for (std::size_t i = 0; i < n_orig && pick.chosen.size() < q; ++i) {
    if (originals[i].rudy <= threshold) take(i);
  }
  std::vector<std::size_t> order(resampled.size());
  std::iota(order.begin(), order.end(), n_orig);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return at(a).scored.prob > at(b).scored.prob; });
  for (auto i : order) {
    if (pick.chosen.size() >= q) break;
    if (at(i).rudy <= threshold) take(i);
  }
  if (pick.chosen.size() < q) {
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < total; ++i) {
      if (!taken[i]) rest.push_back(i);
    }
    std::stable_sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) { return at(a).rudy < at(b).rudy; });
    for (auto i : rest) {
      if (pick.chosen.size() >= q) break;
      take(i);
      pick.fallback = true;
    }
  }
  return pick;
}

std::vector<ScoredAction> resample_for_congestion(std::span<const ScoredAction> distribution,
                                                  std::span<const CongestionCandidate> originals,
                                                  const SearchParams& p, Rng& rng) {
  std::vector<ScoredAction> pool;
  for (const auto& sa : distribution) {
    const bool seen = std::any_of(originals.begin(), originals.end(),
                                  [&](const CongestionCandidate& c) { return c.scored.action == sa.action; });
    if (!seen) pool.push_back(sa);
  }
  if (pool.empty()) return {};
  const auto n = static_cast<std::size_t>(std::ceil(p.resample_frac * p.q - 1e-12));
  return sample(pool, std::max<std::size_t>(n, 1), rng);
}

namespace {

struct Examined {
  ScoredAction scored;
  StepResult result;
  double rudy;
};

Examined examine(const Episode& e, const ScoredAction& sa, const SearchParams& p, const RewardConfig& cfg) {
  auto res = step(e, sa.action, cfg);
  const bool check = std::isfinite(p.congestion_threshold);
  double rudy = std::numeric_limits<double>::quiet_NaN();
  if (check) rudy = res.violated ? kInf : rudy_scalar(res.episode.state(), p.rudy);
  return {sa, std::move(res), rudy};
}

SearchNode make_child(const NodePtr& parent, Examined&& ex, std::size_t slot, std::size_t fallbacks,
                      const SearchParams& p, const RewardConfig& cfg) {
  SearchNode child{std::move(ex.result.episode), 0.0, parent};
  child.depth = parent->depth + 1;
  child.leaf = ex.result.terminal;
  child.key = child_key(parent->key, slot);
  child.fallbacks = fallbacks;
  child.rudy = ex.rudy;
  const double hmin = child.episode.hpwl_min();
  if (ex.result.violated) {
    child.v = -kInf;
  } else if (ex.result.terminal) {
    child.v = leaf_value(child.episode.state(), p, cfg, hmin);
  } else {
    child.v = internal_value(ex.result.delta, p, cfg, hmin);
  }
  return child;
}

}  // namespace

Expansion expand_node(const NodePtr& node, const Policy& policy, const SearchParams& p, const RewardConfig& cfg) {
  Expansion out;
  if (node->leaf || node->episode.done()) return out;
  const auto& ep = node->episode;
  const auto dist = policy.distribution(ep.state(), ep.next_module());
  Rng rng(node->key);
  const auto drawn = sample(dist, static_cast<std::size_t>(p.q), rng);

  std::vector<Examined> examined;
  examined.reserve(drawn.size());
  for (const auto& sa : drawn) examined.push_back(examine(ep, sa, p, cfg));

  const bool over = std::isfinite(p.congestion_threshold) &&
                    std::any_of(examined.begin(), examined.end(),
                                [&](const Examined& e) { return e.rudy > p.congestion_threshold; });
  std::vector<std::size_t> chosen(examined.size());
  std::iota(chosen.begin(), chosen.end(), 0);
  if (over) {
    out.resampled = true;
    std::vector<CongestionCandidate> originals;
    for (const auto& e : examined) originals.push_back({e.scored, e.rudy});
    std::vector<CongestionCandidate> fresh;
    for (const auto& sa : resample_for_congestion(dist, originals, p, rng)) {
      examined.push_back(examine(ep, sa, p, cfg));
      fresh.push_back({sa, examined.back().rudy});
    }
    auto pick = select_congestion_children(originals, fresh, static_cast<std::size_t>(p.q), p.congestion_threshold);
    chosen = std::move(pick.chosen);
    out.fallback = pick.fallback;
  }
  const std::size_t fallbacks = node->fallbacks + (out.fallback ? 1 : 0);
  out.children.reserve(chosen.size());
  for (std::size_t slot = 0; slot < chosen.size(); ++slot) {
    out.children.push_back(make_child(node, std::move(examined[chosen[slot]]), slot, fallbacks, p, cfg));
  }
  return out;
}

Rng level_rng(std::uint64_t seed, int depth) {
  return Rng(mix64(mix64(seed) ^ mix64(0x5851F42D4C957F2DULL + static_cast<std::uint64_t>(depth))));
}

std::vector<NodePtr> prune_level(std::vector<NodePtr> level, const SearchParams& p, Rng& rng) {
  const bool draw = unit_uniform(rng) < p.epsilon;
  std::stable_sort(level.begin(), level.end(), [](const NodePtr& a, const NodePtr& b) {
    return a->v > b->v || (a->v == b->v && a->index < b->index);
  });
  if ((draw || level.size() > p.level_cap) && level.size() > static_cast<std::size_t>(p.beta)) {
    level.resize(static_cast<std::size_t>(p.beta));
  }
  return level;
}

namespace {

std::vector<Expansion> expand_level(const std::vector<NodePtr>& level, const Policy& policy, const SearchParams& p,
                                    const RewardConfig& cfg) {
  std::vector<Expansion> out(level.size());
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(p.threads), level.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < level.size(); ++i) out[i] = expand_node(level[i], policy, p, cfg);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i; (i = next.fetch_add(1)) < level.size();) out[i] = expand_node(level[i], policy, p, cfg);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace

SearchResult search(std::shared_ptr<const Circuit> circuit, const Policy& policy, const SearchParams& p,
                    const RewardConfig& cfg) {
  p.validate();
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  auto root = std::make_shared<SearchNode>(SearchNode{Episode(circuit), 0.0, nullptr});
  root->key = root_key(p.seed);
  root->leaf = root->episode.done();
  SearchResult result;
  auto& stats = result.stats;
  stats.nodes_created = 1;

  NodePtr best;
  auto consider = [&](const NodePtr& n) {
    if (n->leaf && std::isfinite(n->v) && (!best || n->v > best->v)) best = n;
  };
  if (root->leaf) {
    // Empty circuit: nothing to place.
    root->v = 0.0;
    best = root;
  }

  std::vector<NodePtr> level{root};
  std::uint64_t next_index = 1;
  for (int depth = 1;; ++depth) {
    auto expansions = expand_level(level, policy, p, cfg);
    std::vector<NodePtr> created;
    for (auto& ex : expansions) {
      stats.resample_events += ex.resampled ? 1 : 0;
      stats.fallback_events += ex.fallback ? 1 : 0;
      for (auto& child : ex.children) {
        child.index = next_index++;
        created.push_back(std::make_shared<const SearchNode>(std::move(child)));
      }
    }
    if (created.empty()) break;
    stats.nodes_created += created.size();
    stats.max_level_width = std::max(stats.max_level_width, created.size());
    for (const auto& n : created) consider(n);

    Rng rng = level_rng(p.seed, depth);
    const std::size_t before = created.size();
    level = prune_level(std::move(created), p, rng);
    stats.prunes += level.size() < before ? 1 : 0;
    stats.levels = static_cast<std::size_t>(depth);
    stats.level_widths.push_back(level.size());
    std::erase_if(level, [](const NodePtr& n) { return n->leaf; });
    if (level.empty()) break;
  }
  if (!best) throw InfeasibleError("every rollout violated a constraint");

  const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto& state = best->episode.state();
  result.best = best;
  result.state = state;
  result.value = best->v;
  auto& rec = result.record;
  rec.algo = p.q == 1 ? "greedy" : "bsrl";
  rec.runtime_s = runtime;
  rec.ds = state.empty() ? 0.0 : 100.0 * state.ds();
  rec.hpwl = state.hpwl();
  rec.rudy = state.empty() ? 0.0 : rudy_scalar(state, p.rudy);
  rec.reward = episode_return(best->episode.rewards(), cfg.gamma);
  rec.seed = p.seed;
  rec.congestion_fallbacks = best->fallbacks;
  rec.params = p.to_json();
  rec.params["policy"] = policy.name();
  rec.params["reward"] = cfg.to_json();
  return result;
}

SearchResult search(std::shared_ptr<const Circuit> circuit, const PolicyConfig& pc, const SearchParams& p,
                    const RewardConfig& cfg) {
  const auto policy = make_policy(pc.name, pc.temperature, hpwl_min_estimate(*circuit));
  auto res = search(std::move(circuit), *policy, p, cfg);
  res.record.params["temperature"] = pc.temperature;
  return res;
}

RolloutResult greedy_rollout(std::shared_ptr<const Circuit> circuit, const Policy& policy, const RewardConfig& cfg,
                             const SearchParams& p) {
  Episode ep(circuit);
  std::uint64_t key = root_key(p.seed);
  double value = 0.0;
  while (!ep.done()) {
    const auto dist = policy.distribution(ep.state(), ep.next_module());
    Rng rng(key);
    const auto a = sample(dist, 1, rng).front();
    auto res = step(ep, a.action, cfg);
    if (res.violated) {
      value = -kInf;
    } else if (res.terminal) {
      value = leaf_value(res.episode.state(), p, cfg, ep.hpwl_min());
    }
    ep = std::move(res.episode);
    key = child_key(key, 0);
  }
  return {std::move(ep), value};
}

}  // namespace bsfp
