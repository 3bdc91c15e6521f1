#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "bsfp/error.hpp"
#include "bsfp/placement.hpp"
#include "bsfp/rng.hpp"
#include "test_util.hpp"

using namespace bsfp;
using bsfp::testing::make_circuit;
using bsfp::testing::share;

namespace {

/// Per-net half perimeter straight from rectangle corners.
double hpwl_oracle(const PlacementState& s) {
  double total = 0.0;
  for (const auto& net : s.circuit().nets) {
    std::vector<double> xs, ys;
    for (auto id : net.members) {
      if (!s.position(id)) continue;
      const auto& m = s.circuit().module(id);
      xs.push_back(s.position(id)->x() + m.w / 2);
      ys.push_back(s.position(id)->y() + m.h / 2);
    }
    if (xs.size() < 2) continue;
    total += *std::max_element(xs.begin(), xs.end()) - *std::min_element(xs.begin(), xs.end()) +
             *std::max_element(ys.begin(), ys.end()) - *std::min_element(ys.begin(), ys.end());
  }
  return total;
}

bool rel_close(double a, double b, double tol = 1e-9) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Random legal placement of every module: random grid positions, retried until free.
std::vector<std::pair<PlacementState, StepDelta>> random_episode(std::shared_ptr<const Circuit> c, Rng& rng) {
  std::vector<std::pair<PlacementState, StepDelta>> steps;
  PlacementState s(c);
  for (std::size_t id = 0; id < c->size(); ++id) {
    for (;;) {
      const double x = std::floor(unit_uniform(rng) * 1600.0) / 4.0;
      const double y = std::floor(unit_uniform(rng) * 1600.0) / 4.0;
      const auto& m = c->modules[id];
      if (s.overlaps({x, y, m.w, m.h})) continue;
      auto [next, d] = place(s, static_cast<ModuleId>(id), x, y);
      steps.emplace_back(next, d);
      s = next;
      break;
    }
  }
  return steps;
}

}  // namespace

TEST_CASE("placing one module") {
  const auto c = make_circuit({{2, 3}});
  const PlacementState empty(c);
  auto [s, d] = place(empty, 0, 0, 0);
  CHECK(s.ds() == 0.0);
  CHECK(s.hpwl() == 0.0);
  CHECK(s.bbox().x_min == 0.0);
  CHECK(s.bbox().y_min == 0.0);
  CHECK(s.bbox().x_max == 2.0);
  CHECK(s.bbox().y_max == 3.0);
  CHECK(d.d_ds == 0.0);
  CHECK(d.d_hpwl == 0.0);
  CHECK(empty.empty());
}

TEST_CASE("two unit modules on one net") {
  const auto c = make_circuit({{1, 1}, {1, 1}}, {{0, 1}});
  auto s = place(PlacementState(c), 0, 0, 0).first;
  auto [s2, d] = place(s, 1, 2, 0);
  CHECK(s2.hpwl() == doctest::Approx(2.0));
  CHECK(d.d_hpwl == doctest::Approx(2.0));
  CHECK(s.num_placed() == 1);  // source untouched
}

TEST_CASE("overlap is rejected, abutment is not") {
  const auto c = make_circuit({{2, 2}, {1, 1}});
  const auto s = place(PlacementState(c), 0, 0, 0).first;
  CHECK_THROWS_AS(place(s, 1, 1, 1), OverlapError);
  CHECK_THROWS_AS(place(s, 1, 1.5, -0.5), OverlapError);
  CHECK_NOTHROW(place(s, 1, 2, 0));
  CHECK_NOTHROW(place(s, 1, 2, 2));
  CHECK_NOTHROW(place(s, 1, -1, 1));
  CHECK_THROWS_AS(place(s, 0, 5, 5), ValidationError);
}

TEST_CASE("dead_space") {
  const auto c = make_circuit({{1, 1}, {1, 1}});
  const PlacementState empty(c);
  CHECK_THROWS_AS(dead_space(empty), EmptyStateError);
  const auto one = place(empty, 0, 0, 0).first;
  CHECK(dead_space(one) == 0.0);
  CHECK(dead_space(place(one, 1, 1, 1).first) == doctest::Approx(0.5));
  CHECK(place(one, 1, 1, 1).first.ds() == doctest::Approx(0.5));
  CHECK(dead_space(place(one, 1, 1, 0).first) == 0.0);
}

TEST_CASE("hpwl of a three-pin net") {
  const auto c = make_circuit({{1, 1}, {1, 1}, {1, 1}}, {{0, 1, 2}});
  PlacementState s(c);
  CHECK(hpwl(s) == 0.0);
  s = place(s, 0, -0.5, -0.5).first;
  s = place(s, 1, 3.5, -0.5).first;
  s = place(s, 2, 1.5, 2.5).first;
  CHECK(hpwl(s) == doctest::Approx(7.0));
  CHECK(s.hpwl() == doctest::Approx(7.0));
}

TEST_CASE("aspect_ratio") {
  const auto tall = make_circuit({{2, 4}});
  CHECK(aspect_ratio(place(PlacementState(tall), 0, 0, 0).first) == doctest::Approx(0.5));
  CHECK_THROWS_AS(aspect_ratio(PlacementState(tall)), EmptyStateError);

  const auto units = make_circuit({{1, 1}, {1, 1}, {1, 1}, {1, 1}});
  PlacementState sq(units);
  sq = place(sq, 0, 0, 0).first;
  sq = place(sq, 1, 1, 0).first;
  sq = place(sq, 2, 0, 1).first;
  sq = place(sq, 3, 1, 1).first;
  CHECK(aspect_ratio(sq) == doctest::Approx(1.0));

  PlacementState row(units);
  row = place(row, 0, 0, 0).first;
  row = place(row, 1, 1, 0).first;
  row = place(row, 2, 2, 0).first;
  CHECK(aspect_ratio(row) == doctest::Approx(3.0));
}

TEST_CASE("incremental metrics equal from-scratch recomputation on random episodes") {
  Rng rng(42);
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto c = share(gen_circuit(seed, 3 + static_cast<int>(seed % 18), 0.8));
    const auto steps = random_episode(c, rng);
    double sum_ds = 0.0, sum_hpwl = 0.0;
    for (const auto& [s, d] : steps) {
      CHECK(rel_close(s.ds(), dead_space(s)));
      CHECK(rel_close(s.hpwl(), hpwl_oracle(s)));
      CHECK(s.ds() >= 0.0);
      CHECK(s.ds() < 1.0);
      sum_ds += d.d_ds;
      sum_hpwl += d.d_hpwl;
    }
    const auto& final_state = steps.back().first;
    CHECK(rel_close(sum_ds, final_state.ds()));
    CHECK(rel_close(sum_hpwl, final_state.hpwl()));
    for (auto a : final_state.placed()) {
      for (auto b : final_state.placed()) {
        if (a < b) CHECK_FALSE(rects_overlap(final_state.rect(a), final_state.rect(b)));
      }
    }
    // bbox is tight
    double x_lo = 1e300, x_hi = -1e300;
    for (auto id : final_state.placed()) {
      x_lo = std::min(x_lo, final_state.rect(id).x);
      x_hi = std::max(x_hi, final_state.rect(id).x + final_state.rect(id).w);
    }
    CHECK(final_state.bbox().x_min == x_lo);
    CHECK(final_state.bbox().x_max == x_hi);
  }
}

TEST_CASE("metrics are invariant under joint translation") {
  Rng rng(7);
  const auto c = share(gen_circuit(5, 10, 0.8));
  const auto steps = random_episode(c, rng);
  const auto& s = steps.back().first;
  PlacementState moved(c);
  for (auto id : s.placed()) moved = place(moved, id, s.rect(id).x + 13.25, s.rect(id).y - 7.5).first;
  CHECK(moved.ds() == doctest::Approx(s.ds()).epsilon(1e-12));
  CHECK(moved.hpwl() == doctest::Approx(s.hpwl()).epsilon(1e-12));
  CHECK(moved.bbox().width() == doctest::Approx(s.bbox().width()));
}

TEST_CASE("preview agrees with place") {
  Rng rng(3);
  const auto c = share(gen_circuit(9, 8, 1.0));
  const auto steps = random_episode(c, rng);
  PlacementState prev(c);
  for (const auto& [s, d] : steps) {
    const ModuleId id = s.placed().back();
    const auto p = prev.preview(id, s.rect(id).x, s.rect(id).y);
    CHECK(p.d_ds == d.d_ds);
    CHECK(p.d_hpwl == d.d_hpwl);
    prev = s;
  }
}
