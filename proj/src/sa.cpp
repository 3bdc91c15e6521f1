#include "bsfp/sa.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "bsfp/error.hpp"
#include "bsfp/policy.hpp"
#include "bsfp/rng.hpp"

namespace bsfp {

SeqPair SeqPair::identity(std::size_t m) {
  SeqPair sp;
  sp.plus.resize(m);
  std::iota(sp.plus.begin(), sp.plus.end(), 0);
  sp.minus = sp.plus;
  return sp;
}

void SaParams::validate() const {
  if (!(t_min > 0.0)) throw ValidationError("--sa-t-min must be positive");
  if (!(t0 >= t_min)) throw ValidationError("--sa-t0 must be >= --sa-t-min");
  if (!(cooling > 0.0 && cooling < 1.0)) throw ValidationError("--sa-cooling must be in (0, 1)");
  if (iters_per_temp < 0) throw ValidationError("--sa-iters must be >= 0");
}

nlohmann::json SaParams::to_json() const {
  return {{"t0", t0}, {"cooling", cooling}, {"iters_per_temp", iters_per_temp}, {"t_min", t_min}, {"seed", seed}};
}

PlacementState decode(const SeqPair& sp, std::shared_ptr<const Circuit> circuit) {
  const std::size_t m = circuit->size();
  if (sp.plus.size() != m || sp.minus.size() != m) throw ValidationError("sequence pair size mismatch");
  std::vector<std::size_t> pos_plus(m), pos_minus(m);
  for (std::size_t i = 0; i < m; ++i) {
    pos_plus[static_cast<std::size_t>(sp.plus[i])] = i;
    pos_minus[static_cast<std::size_t>(sp.minus[i])] = i;
  }
  std::vector<double> xs(m, 0.0), ys(m, 0.0);
  // Visiting in `plus` order handles both relations: every left or below
  // predecessor of b precedes b in `plus`.
  for (std::size_t i = 0; i < m; ++i) {
    const auto b = static_cast<std::size_t>(sp.plus[i]);
    for (std::size_t j = 0; j < i; ++j) {
      const auto a = static_cast<std::size_t>(sp.plus[j]);
      const auto& ma = circuit->modules[a];
      if (pos_minus[a] < pos_minus[b]) {
        xs[b] = std::max(xs[b], xs[a] + ma.w);
      } else {
        ys[b] = std::max(ys[b], ys[a] + ma.h);
      }
    }
  }
  PlacementState s(circuit);
  for (auto id : sp.plus) s = place(s, id, xs[static_cast<std::size_t>(id)], ys[static_cast<std::size_t>(id)]).first;
  return s;
}

double sa_cost(const PlacementState& s, const RewardConfig& cfg, double hpwl_min) {
  double cost = -terminal_reward(s, cfg, hpwl_min);
  for (const auto& a : s.circuit().alignments) {
    const Point pa = s.pin(a.a), pb = s.pin(a.b);
    const double gap = a.axis == Axis::Vertical ? pa.x() - pb.x() : pa.y() - pb.y();
    if (std::abs(gap) > kGeomTol) cost += std::abs(cfg.penalty);
  }
  return cost;
}

SaResult anneal(std::shared_ptr<const Circuit> circuit, const SaParams& params, const RewardConfig& cfg) {
  params.validate();
  cfg.validate();
  const auto t_start = std::chrono::steady_clock::now();
  const std::size_t m = circuit->size();
  const double hmin = hpwl_min_estimate(*circuit);
  const int iters = params.iters_per_temp > 0 ? params.iters_per_temp : static_cast<int>(50 * m);
  Rng rng(mix64(params.seed));

  SeqPair cur = SeqPair::identity(m);
  PlacementState cur_state = decode(cur, circuit);
  double cur_cost = sa_cost(cur_state, cfg, hmin);
  SaResult res{cur_state, cur, cur_cost, {}, {}};

  for (double temp = params.t0; temp > params.t_min && m >= 2; temp *= params.cooling) {
    for (int it = 0; it < iters; ++it) {
      SeqPair cand = cur;
      const std::size_t i = uniform_index(rng, m);
      std::size_t j = uniform_index(rng, m - 1);
      if (j >= i) ++j;
      switch (uniform_index(rng, 3)) {
        case 0:
          std::swap(cand.plus[i], cand.plus[j]);
          break;
        case 1: {
          const auto a = cand.plus[i], b = cand.plus[j];
          std::swap(cand.plus[i], cand.plus[j]);
          auto ia = std::find(cand.minus.begin(), cand.minus.end(), a);
          auto ib = std::find(cand.minus.begin(), cand.minus.end(), b);
          std::iter_swap(ia, ib);
          break;
        }
        default: {
          auto& seq = unit_uniform(rng) < 0.5 ? cand.plus : cand.minus;
          const std::size_t k = uniform_index(rng, m - 1);
          std::swap(seq[k], seq[k + 1]);
          break;
        }
      }
      PlacementState st = decode(cand, circuit);
      const double cost = sa_cost(st, cfg, hmin);
      const double diff = cost - cur_cost;
      if (diff <= 0.0 || unit_uniform(rng) < std::exp(-diff / temp)) {
        cur = std::move(cand);
        cur_cost = cost;
        if (cost < res.best_cost) {
          res.best_cost = cost;
          res.best = cur;
          res.state = std::move(st);
        }
      }
    }
    res.best_cost_trace.push_back(res.best_cost);
  }

  auto& rec = res.record;
  rec.algo = "sa";
  rec.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  rec.ds = 100.0 * res.state.ds();
  rec.hpwl = res.state.hpwl();
  rec.rudy = rudy_scalar(res.state, params.rudy);
  rec.reward = floorplan_return(res.state, cfg, hmin);
  rec.seed = params.seed;
  rec.params = params.to_json();
  rec.params["reward"] = cfg.to_json();
  return res;
}

}  // namespace bsfp
