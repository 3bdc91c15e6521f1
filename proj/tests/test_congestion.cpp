#include <doctest.h>

#include <cmath>
#include <sstream>

#include "bsfp/congestion.hpp"
#include "bsfp/error.hpp"
#include "bsfp/rng.hpp"
#include "test_util.hpp"

using namespace bsfp;
using bsfp::testing::make_circuit;
using bsfp::testing::share;

namespace {

PlacementState place_all(std::shared_ptr<const Circuit> c, std::initializer_list<std::pair<double, double>> at) {
  PlacementState s(c);
  ModuleId id = 0;
  for (auto [x, y] : at) s = place(s, id++, x, y).first;
  return s;
}

/// Pointwise brute force: every cell center against every net box, no index window.
Eigen::MatrixXd rudy_oracle(const PlacementState& s, int g, double ww) {
  const auto& b = s.bbox();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(g, g);
  for (const auto& net : s.circuit().nets) {
    double xl = 1e300, xh = -1e300, yl = 1e300, yh = -1e300;
    int k = 0;
    for (auto id : net.members) {
      if (!s.is_placed(id)) continue;
      const auto r = s.rect(id);
      xl = std::min(xl, r.x + r.w / 2);
      xh = std::max(xh, r.x + r.w / 2);
      yl = std::min(yl, r.y + r.h / 2);
      yh = std::max(yh, r.y + r.h / 2);
      ++k;
    }
    if (k < 2) continue;
    const double d = ((xh - xl) + (yh - yl)) * ww / std::max((xh - xl) * (yh - yl), ww * ww);
    for (int row = 0; row < g; ++row) {
      for (int col = 0; col < g; ++col) {
        const double px = b.x_min + (col + 0.5) * (b.x_max - b.x_min) / g;
        const double py = b.y_min + (row + 0.5) * (b.y_max - b.y_min) / g;
        if (px >= xl && px <= xh && py >= yl && py <= yh) out(row, col) += d;
      }
    }
  }
  return out;
}

PlacementState random_state(std::uint64_t seed, int m) {
  const auto c = share(gen_circuit(seed, m, 1.0));
  Rng rng(seed);
  PlacementState s(c);
  for (ModuleId id = 0; id < m; ++id) {
    for (;;) {
      const double x = std::floor(unit_uniform(rng) * 1600.0) / 4.0;
      const double y = std::floor(unit_uniform(rng) * 1600.0) / 4.0;
      const auto& mod = c->module(id);
      if (s.overlaps({x, y, mod.w, mod.h})) continue;
      s = place(s, id, x, y).first;
      break;
    }
  }
  return s;
}

}  // namespace

TEST_CASE("net_box density") {
  const auto c = make_circuit({{1, 1}, {1, 1}, {1, 1}}, {{0, 1}, {0, 2}});
  const auto s = place_all(c, {{-0.5, -0.5}, {3.5, 2.5}, {3.5, -0.5}});
  const auto nb = net_box(s, c->nets[0]);
  CHECK(nb.x == 0.0);
  CHECK(nb.y == 0.0);
  CHECK(nb.w == 4.0);
  CHECK(nb.h == 3.0);
  CHECK(nb.wa == doctest::Approx(3.5));
  CHECK(nb.na == doctest::Approx(12.0));
  CHECK(nb.d == doctest::Approx(3.5 / 12.0));

  // Collinear pins: area clamps to wire width squared.
  const auto flat = net_box(s, c->nets[1]);
  CHECK(flat.h == 0.0);
  CHECK(flat.na == doctest::Approx(0.25));
  CHECK(flat.d == doctest::Approx(8.0));

  const auto partial = place_all(c, {{0, 0}});
  CHECK_THROWS_AS(net_box(partial, c->nets[0]), ValidationError);
}

TEST_CASE("indicator is closed") {
  const NetBox nb{0, 0, 4, 3};
  CHECK(indicator(nb, 0, 0) == 1);
  CHECK(indicator(nb, 4, 3) == 1);
  CHECK(indicator(nb, 2, 1.5) == 1);
  CHECK(indicator(nb, 4.0001, 1) == 0);
  CHECK(indicator(nb, 2, -1e-9) == 0);
}

TEST_CASE("grid without nets is zero") {
  const auto c = make_circuit({{2, 2}, {3, 1}});
  const auto s = place_all(c, {{0, 0}, {2, 0}});
  const auto g = rudy_grid(s, 8);
  CHECK(g.cells.rows() == 8);
  CHECK(g.cells.cols() == 8);
  CHECK(g.cells.isZero(0.0));
  CHECK(rudy_scalar(s) == 0.0);
  CHECK_THROWS_AS(rudy_grid(PlacementState(c)), EmptyStateError);
}

TEST_CASE("net spanning the bbox covers the interior uniformly") {
  // Pins at (0.5,0.5) and (9.5,9.5) over bbox [0,10]^2: centers outside the pin box are the
  // outermost ring only when the cells are wider than 0.5.
  const auto c = make_circuit({{1, 1}, {1, 1}}, {{0, 1}});
  const auto s = place_all(c, {{0, 0}, {9, 9}});
  const auto g = rudy_grid(s, 4);
  const double d = 18 * 0.5 / 81.0;
  for (int r = 0; r < 4; ++r) {
    for (int col = 0; col < 4; ++col) CHECK(g.cells(r, col) == doctest::Approx(d));
  }
  CHECK(rudy_scalar(s, {4, 0.5, RudyAggregate::Max}) == doctest::Approx(d));
  CHECK(rudy_scalar(s, {4, 0.5, RudyAggregate::Mean}) == doctest::Approx(d));
}

TEST_CASE("grid matches the pointwise oracle") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto s = random_state(seed, 4 + static_cast<int>(seed % 12));
    for (int g : {1, 7, 32}) {
      const auto grid = rudy_grid(s, g);
      const auto ref = rudy_oracle(s, g, 0.5);
      CHECK((grid.cells - ref).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(grid.cells.minCoeff() >= 0.0);
    }
    const auto grid = rudy_grid(s, 16);
    CHECK(rudy_scalar(s, {16, 0.5, RudyAggregate::Max}) == grid.cells.maxCoeff());
    CHECK(rudy_scalar(s, {16, 0.5, RudyAggregate::Mean}) == doctest::Approx(grid.cells.mean()));
  }
}

TEST_CASE("adding a net never lowers any cell") {
  const auto base = make_circuit({{1, 1}, {1, 1}, {2, 1}, {1, 3}}, {{0, 1}});
  const auto more = make_circuit({{1, 1}, {1, 1}, {2, 1}, {1, 3}}, {{0, 1}, {1, 2, 3}});
  const std::initializer_list<std::pair<double, double>> at{{0, 0}, {5, 2}, {1, 4}, {3, 0}};
  const auto a = rudy_grid(place_all(base, at), 16);
  const auto b = rudy_grid(place_all(more, at), 16);
  CHECK((b.cells - a.cells).minCoeff() >= 0.0);
  CHECK((b.cells - a.cells).maxCoeff() > 0.0);
}

TEST_CASE("density is invariant when geometry and wire width scale together") {
  const auto c = make_circuit({{1, 1}, {2, 1}, {1, 2}}, {{0, 1}, {0, 1, 2}});
  const auto c2 = make_circuit({{2, 2}, {4, 2}, {2, 4}}, {{0, 1}, {0, 1, 2}});
  const auto s = place_all(c, {{0, 0}, {3, 1}, {1, 3}});
  const auto s2 = place_all(c2, {{0, 0}, {6, 2}, {2, 6}});
  const auto g1 = rudy_grid(s, 8, 0.5);
  const auto g2 = rudy_grid(s2, 8, 1.0);  // wire width scales with the geometry
  CHECK((g1.cells - g2.cells).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(g1.cells.maxCoeff() > 0.0);
}

TEST_CASE("cell_center and csv layout") {
  const auto c = make_circuit({{1, 1}, {1, 1}}, {{0, 1}});
  const auto s = place_all(c, {{0, 0}, {3, 1}});
  const auto g = rudy_grid(s, 2);
  CHECK(g.cell_center(0, 0).x() == doctest::Approx(1.0));
  CHECK(g.cell_center(0, 0).y() == doctest::Approx(0.5));
  CHECK(g.cell_center(1, 1).x() == doctest::Approx(3.0));
  CHECK(g.cell_center(1, 1).y() == doctest::Approx(1.5));

  const auto csv = to_csv(g);
  std::istringstream in(csv);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    CHECK(std::count(line.begin(), line.end(), ',') == 1);
    ++rows;
  }
  CHECK(rows == 2);
  CHECK_THROWS_AS(rudy_grid(s, 0), ValidationError);
}
