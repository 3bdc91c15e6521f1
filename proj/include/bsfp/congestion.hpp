#pragma once

#include <string>

#include <Eigen/Core>

#include "bsfp/placement.hpp"

namespace bsfp {

/// Pin bounding box of one net together with its RUDY wire density.
struct NetBox {
  double x = 0.0;  // lower-left corner
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
  double wa = 0.0;  // wire area, half perimeter * wire width
  double na = 0.0;  // net area, clamped below by wire width squared
  double d = 0.0;   // wa / na
};

enum class RudyAggregate { Max, Mean };

struct RudyOptions {
  int grid = 32;
  double wire_width = 0.5;
  RudyAggregate aggregate = RudyAggregate::Max;
};

/// Routing demand sampled at the centers of a G x G tiling of the placement
/// bounding box. cells(r, c) is the cell in row r (counted upward from y_min)
/// and column c (rightward from x_min).
struct RudyGrid {
  Eigen::MatrixXd cells;
  BBox extent;
  int g = 0;

  Point cell_center(int row, int col) const;
};

/// Throws ValidationError when fewer than two members of `n` are placed.
NetBox net_box(const PlacementState& s, const Net& n, double wire_width = 0.5);

/// 1 inside the closed net box, 0 outside.
inline int indicator(const NetBox& nb, double x, double y) {
  const double dx = x - nb.x;
  const double dy = y - nb.y;
  return (0.0 <= dx && dx <= nb.w && 0.0 <= dy && dy <= nb.h) ? 1 : 0;
}

RudyGrid rudy_grid(const PlacementState& s, int g = 32, double wire_width = 0.5);

/// Scalar congestion figure: max (default) or mean cell of rudy_grid.
double rudy_scalar(const PlacementState& s, const RudyOptions& opt = {});

/// Row-major CSV, one grid row per line, row 0 first.
std::string to_csv(const RudyGrid& grid);

}  // namespace bsfp
