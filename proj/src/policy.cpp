#include "bsfp/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bsfp/error.hpp"

namespace bsfp {

namespace {

struct Binding {
  ModuleId partner;
  Axis axis;
};

std::vector<Binding> bindings_of(const PlacementState& s, ModuleId module,
                                 std::span<const AlignmentConstraint> alignments) {
  std::vector<Binding> out;
  for (const auto& a : alignments) {
    if (a.a == module && s.is_placed(a.b)) out.push_back({a.b, a.axis});
    if (a.b == module && s.is_placed(a.a)) out.push_back({a.a, a.axis});
  }
  return out;
}

bool satisfies(const PlacementState& s, const Rect& r, const Binding& b) {
  const Point mine = r.center();
  const Point theirs = s.pin(b.partner);
  return b.axis == Axis::Vertical ? std::abs(mine.x() - theirs.x()) <= kGeomTol
                                  : std::abs(mine.y() - theirs.y()) <= kGeomTol;
}

/// Moves `r` along (dx, dy) in {-1, 0, 1}^2 past every blocker until it is free.
Rect slide_until_free(const PlacementState& s, Rect r, int dx, int dy) {
  for (;;) {
    bool moved = false;
    for (auto id : s.placed()) {
      const Rect o = s.rect(id);
      if (!rects_overlap(r, o)) continue;
      if (dx > 0) r.x = o.x + o.w;
      if (dx < 0) r.x = o.x - r.w;
      if (dy > 0) r.y = o.y + o.h;
      if (dy < 0) r.y = o.y - r.h;
      moved = true;
    }
    if (!moved) return r;
  }
}

void sort_unique(std::vector<Action>& acts) {
  std::sort(acts.begin(), acts.end(), [](const Action& a, const Action& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  acts.erase(std::unique(acts.begin(), acts.end(),
                         [](const Action& a, const Action& b) {
                           return std::abs(a.x - b.x) <= 1e-12 && std::abs(a.y - b.y) <= 1e-12;
                         }),
             acts.end());
}

}  // namespace

std::vector<Action> candidates(const PlacementState& s, ModuleId module,
                               std::span<const AlignmentConstraint> alignments) {
  if (s.is_placed(module)) throw ValidationError("module " + std::to_string(module) + " is already placed");
  if (s.empty()) return {Action{module, 0.0, 0.0}};

  const auto& mod = s.circuit().module(module);
  const double w = mod.w, h = mod.h;
  std::vector<Action> acts;
  acts.reserve(8 * s.num_placed());
  for (auto id : s.placed()) {
    const Rect p = s.rect(id);
    const double xs[2] = {p.x, p.x + p.w - w};  // left- or right-flush along a horizontal side
    const double ys[2] = {p.y, p.y + p.h - h};  // bottom- or top-flush along a vertical side
    for (double y : ys) {
      acts.push_back({module, p.x + p.w, y});
      acts.push_back({module, p.x - w, y});
    }
    for (double x : xs) {
      acts.push_back({module, x, p.y + p.h});
      acts.push_back({module, x, p.y - h});
    }
  }
  std::erase_if(acts, [&](const Action& a) { return s.overlaps({a.x, a.y, w, h}); });

  const auto binds = bindings_of(s, module, alignments);
  if (!binds.empty()) {
    auto aligned = [&](const Action& a) {
      const Rect r{a.x, a.y, w, h};
      return std::all_of(binds.begin(), binds.end(), [&](const Binding& b) { return satisfies(s, r, b); });
    };
    std::erase_if(acts, [&](const Action& a) { return !aligned(a); });
    if (acts.empty()) {
      std::vector<Action> injected;
      std::optional<double> cx, cy;
      for (const auto& b : binds) {
        const Rect p = s.rect(b.partner);
        const Point c = p.center();
        if (b.axis == Axis::Vertical) {
          cx = c.x();
          const double x = c.x() - 0.5 * w;
          for (auto r : {slide_until_free(s, {x, p.y + p.h, w, h}, 0, 1), slide_until_free(s, {x, p.y - h, w, h}, 0, -1)}) {
            injected.push_back({module, r.x, r.y});
          }
        } else {
          cy = c.y();
          const double y = c.y() - 0.5 * h;
          for (auto r : {slide_until_free(s, {p.x + p.w, y, w, h}, 1, 0), slide_until_free(s, {p.x - w, y, w, h}, -1, 0)}) {
            injected.push_back({module, r.x, r.y});
          }
        }
      }
      if (cx && cy) {
        const Rect r{*cx - 0.5 * w, *cy - 0.5 * h, w, h};
        if (!s.overlaps(r)) injected.push_back({module, r.x, r.y});
      }
      for (const auto& a : injected) {
        if (aligned(a)) acts.push_back(a);
      }
      // Conflicting constraints: keep the legal injected positions and let the
      // environment flag the violation.
      if (acts.empty()) acts = std::move(injected);
    }
  }

  if (acts.empty()) {
    const auto& b = s.bbox();
    acts.push_back({module, b.x_max, b.y_min});
  }
  sort_unique(acts);
  return acts;
}

bool alignment_satisfied(const PlacementState& s, ModuleId module) {
  if (!s.is_placed(module)) return true;
  const Rect r = s.rect(module);
  const auto binds = bindings_of(s, module, s.circuit().alignments);
  return std::all_of(binds.begin(), binds.end(), [&](const Binding& b) { return satisfies(s, r, b); });
}

std::vector<ScoredAction> score_and_distribute(const PlacementState& s, std::span<const Action> acts,
                                               double temperature, double hpwl_min) {
  if (acts.empty()) throw ValidationError("score_and_distribute: empty action list");
  if (!(temperature > 0.0)) throw ValidationError("temperature must be positive");
  std::vector<ScoredAction> out;
  out.reserve(acts.size());
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& a : acts) {
    const StepDelta d = s.preview(a.module, a.x, a.y);
    const double score = -(d.d_ds + d.d_hpwl / hpwl_min);
    best = std::max(best, score);
    out.push_back({a, 0.0, score});
  }
  double z = 0.0;
  for (auto& sa : out) z += (sa.prob = std::exp((sa.score - best) / temperature));
  for (auto& sa : out) sa.prob /= z;
  return out;
}

std::vector<ScoredAction> sample(std::span<const ScoredAction> scored, std::size_t k, Rng& rng) {
  if (k == 0) throw ValidationError("sample: k must be >= 1");
  if (scored.size() <= k) return {scored.begin(), scored.end()};
  std::vector<ScoredAction> pool(scored.begin(), scored.end());
  std::vector<ScoredAction> out;
  out.reserve(k);
  while (out.size() < k) {
    double mass = 0.0;
    for (const auto& sa : pool) mass += sa.prob;
    const double u = unit_uniform(rng) * mass;
    std::size_t pick = pool.size() - 1;
    double acc = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      acc += pool[i].prob;
      if (u < acc) {
        pick = i;
        break;
      }
    }
    out.push_back(pool[pick]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return out;
}

GreedySoftmaxPolicy::GreedySoftmaxPolicy(double temperature, double hpwl_min)
    : temperature_(temperature), hpwl_min_(hpwl_min) {
  if (!(temperature > 0.0)) throw ValidationError("temperature must be positive");
  if (!(hpwl_min > 0.0)) throw ValidationError("hpwl_min must be positive");
}

std::vector<ScoredAction> GreedySoftmaxPolicy::distribution(const PlacementState& s, ModuleId module) const {
  const auto acts = candidates(s, module, s.circuit().alignments);
  return score_and_distribute(s, acts, temperature_, hpwl_min_);
}

std::unique_ptr<Policy> make_policy(const std::string& name, double temperature, double hpwl_min) {
  if (name == "greedy-softmax") return std::make_unique<GreedySoftmaxPolicy>(temperature, hpwl_min);
  throw ValidationError("unknown policy '" + name + "'");
}

}  // namespace bsfp
