#include "bsfp/congestion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bsfp/error.hpp"

namespace bsfp {

Point RudyGrid::cell_center(int row, int col) const {
  const double cw = extent.width() / g;
  const double ch = extent.height() / g;
  return {extent.x_min + (col + 0.5) * cw, extent.y_min + (row + 0.5) * ch};
}

NetBox net_box(const PlacementState& s, const Net& n, double wire_width) {
  int count = 0;
  double x_lo = std::numeric_limits<double>::infinity(), y_lo = x_lo;
  double x_hi = -x_lo, y_hi = -x_lo;
  for (auto id : n.members) {
    if (!s.is_placed(id)) continue;
    const Point c = s.pin(id);
    ++count;
    x_lo = std::min(x_lo, c.x());
    x_hi = std::max(x_hi, c.x());
    y_lo = std::min(y_lo, c.y());
    y_hi = std::max(y_hi, c.y());
  }
  if (count < 2) throw ValidationError("net " + std::to_string(n.id) + " has fewer than 2 placed members");
  NetBox nb{x_lo, y_lo, x_hi - x_lo, y_hi - y_lo};
  nb.wa = (nb.w + nb.h) * wire_width;
  nb.na = std::max(nb.w * nb.h, wire_width * wire_width);
  nb.d = nb.wa / nb.na;
  return nb;
}

namespace {

int placed_members(const PlacementState& s, const Net& n) {
  return static_cast<int>(std::count_if(n.members.begin(), n.members.end(), [&](ModuleId id) { return s.is_placed(id); }));
}

}  // namespace

RudyGrid rudy_grid(const PlacementState& s, int g, double wire_width) {
  if (g < 1) throw ValidationError("RUDY grid resolution must be >= 1");
  RudyGrid grid{Eigen::MatrixXd::Zero(g, g), s.bbox(), g};
  const double cw = grid.extent.width() / g;
  const double ch = grid.extent.height() / g;
  for (const auto& net : s.circuit().nets) {
    if (placed_members(s, net) < 2) continue;
    const NetBox nb = net_box(s, net, wire_width);
    // Candidate index window, widened by one cell so rounding never drops a
    // covered center; the exact indicator test decides membership.
    auto lo = [&](double v, double origin, double step) {
      return std::clamp(static_cast<int>(std::floor((v - origin) / step - 0.5)) - 1, 0, g - 1);
    };
    auto hi = [&](double v, double origin, double step) {
      return std::clamp(static_cast<int>(std::ceil((v - origin) / step - 0.5)) + 1, 0, g - 1);
    };
    const int c0 = lo(nb.x, grid.extent.x_min, cw), c1 = hi(nb.x + nb.w, grid.extent.x_min, cw);
    const int r0 = lo(nb.y, grid.extent.y_min, ch), r1 = hi(nb.y + nb.h, grid.extent.y_min, ch);
    for (int r = r0; r <= r1; ++r) {
      for (int c = c0; c <= c1; ++c) {
        const Point p = grid.cell_center(r, c);
        if (indicator(nb, p.x(), p.y())) grid.cells(r, c) += nb.d;
      }
    }
  }
  return grid;
}

double rudy_scalar(const PlacementState& s, const RudyOptions& opt) {
  const auto grid = rudy_grid(s, opt.grid, opt.wire_width);
  return opt.aggregate == RudyAggregate::Max ? grid.cells.maxCoeff() : grid.cells.mean();
}

std::string to_csv(const RudyGrid& grid) {
  std::ostringstream os;
  os.precision(17);
  for (int r = 0; r < grid.g; ++r) {
    for (int c = 0; c < grid.g; ++c) {
      if (c) os << ',';
      os << grid.cells(r, c);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace bsfp
