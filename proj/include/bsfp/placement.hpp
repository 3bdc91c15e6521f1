#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "bsfp/circuit.hpp"

namespace bsfp {

using Point = Eigen::Vector2d;

/// Absolute tolerance for geometric comparisons (overlap, alignment).
inline constexpr double kGeomTol = 1e-9;

struct Rect {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  Point center() const { return {x + 0.5 * w, y + 0.5 * h}; }
};

/// Open-interior intersection; shared edges (within kGeomTol) are not overlap.
bool rects_overlap(const Rect& a, const Rect& b);

struct BBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
};

struct StepDelta {
  double d_ds = 0.0;
  double d_hpwl = 0.0;
};

/// Partial floorplan. Immutable: place() returns a new state and leaves the
/// source untouched, so sibling states in a search tree never interfere.
///
/// The running dead space and HPWL are maintained per step; the free functions
/// dead_space() and hpwl() recompute them from coordinates alone.
class PlacementState {
 public:
  PlacementState() = default;
  explicit PlacementState(std::shared_ptr<const Circuit> circuit);

  const Circuit& circuit() const { return *circuit_; }
  const std::shared_ptr<const Circuit>& circuit_ptr() const { return circuit_; }

  bool empty() const { return placed_.empty(); }
  bool complete() const { return placed_.size() == circuit_->size(); }
  std::size_t num_placed() const { return placed_.size(); }
  const std::vector<ModuleId>& placed() const { return placed_; }
  bool is_placed(ModuleId id) const { return pos_[static_cast<std::size_t>(id)].has_value(); }

  /// Bottom-left corner, if placed.
  const std::optional<Point>& position(ModuleId id) const { return pos_.at(static_cast<std::size_t>(id)); }
  Rect rect(ModuleId id) const;
  Point pin(ModuleId id) const { return rect(id).center(); }

  /// Throws EmptyStateError when nothing is placed.
  const BBox& bbox() const;
  double ds() const { return ds_; }
  double hpwl() const { return hpwl_; }
  double placed_area() const { return placed_area_; }

  /// True if `r` intersects any placed module.
  bool overlaps(const Rect& r) const;

  /// The StepDelta place() would report, without building the successor and
  /// without the overlap check.
  StepDelta preview(ModuleId module, double x, double y) const;

  friend std::pair<PlacementState, StepDelta> place(const PlacementState&, ModuleId, double, double);

 private:
  struct PinBox {
    int count = 0;
    double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
    double half_perimeter() const { return count >= 2 ? (x_hi - x_lo) + (y_hi - y_lo) : 0.0; }
  };
  struct Topology {
    std::vector<std::vector<int>> nets_of;  // module -> incident net indices
  };

  std::shared_ptr<const Circuit> circuit_;
  std::shared_ptr<const Topology> topo_;
  std::vector<std::optional<Point>> pos_;
  std::vector<ModuleId> placed_;
  std::vector<PinBox> pin_boxes_;
  BBox bbox_;
  double placed_area_ = 0.0;
  double ds_ = 0.0;
  double hpwl_ = 0.0;
};

/// Places `module` with its bottom-left corner at (x, y). Throws OverlapError on
/// intersection and ValidationError if the module is already placed.
std::pair<PlacementState, StepDelta> place(const PlacementState& s, ModuleId module, double x, double y);

/// 1 - placed area / bbox area, computed from the coordinates.
double dead_space(const PlacementState& s);

/// Sum over nets with >= 2 placed members of the pin-box half perimeter.
double hpwl(const PlacementState& s);

/// bbox width / height.
double aspect_ratio(const PlacementState& s);

}  // namespace bsfp
