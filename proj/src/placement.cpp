#include "bsfp/placement.hpp"

#include <algorithm>
#include <limits>

#include "bsfp/error.hpp"

namespace bsfp {

bool rects_overlap(const Rect& a, const Rect& b) {
  const double ix = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  const double iy = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  return ix > kGeomTol && iy > kGeomTol;
}

PlacementState::PlacementState(std::shared_ptr<const Circuit> circuit) : circuit_(std::move(circuit)) {
  auto topo = std::make_shared<Topology>();
  topo->nets_of.resize(circuit_->size());
  for (std::size_t n = 0; n < circuit_->nets.size(); ++n) {
    for (auto id : circuit_->nets[n].members) topo->nets_of[static_cast<std::size_t>(id)].push_back(static_cast<int>(n));
  }
  topo_ = std::move(topo);
  pos_.resize(circuit_->size());
  pin_boxes_.resize(circuit_->nets.size());
  placed_.reserve(circuit_->size());
}

Rect PlacementState::rect(ModuleId id) const {
  const auto& p = pos_.at(static_cast<std::size_t>(id));
  if (!p) throw ValidationError("module " + std::to_string(id) + " is not placed");
  const auto& m = circuit_->module(id);
  return {p->x(), p->y(), m.w, m.h};
}

const BBox& PlacementState::bbox() const {
  if (placed_.empty()) throw EmptyStateError("bounding box of an empty placement");
  return bbox_;
}

bool PlacementState::overlaps(const Rect& r) const {
  return std::any_of(placed_.begin(), placed_.end(), [&](ModuleId id) { return rects_overlap(r, rect(id)); });
}

StepDelta PlacementState::preview(ModuleId module, double x, double y) const {
  const auto& mod = circuit_->module(module);
  double ds = 0.0;
  if (!placed_.empty()) {
    const BBox b{std::min(bbox_.x_min, x), std::min(bbox_.y_min, y), std::max(bbox_.x_max, x + mod.w),
                 std::max(bbox_.y_max, y + mod.h)};
    ds = std::max(0.0, 1.0 - (placed_area_ + mod.area()) / b.area());
  }
  const Point c = Rect{x, y, mod.w, mod.h}.center();
  const auto& incident = topo_->nets_of[static_cast<std::size_t>(module)];
  double total = 0.0;
  auto next = incident.begin();
  for (std::size_t n = 0; n < pin_boxes_.size(); ++n) {
    PinBox pb = pin_boxes_[n];
    if (next != incident.end() && static_cast<std::size_t>(*next) == n) {
      ++next;
      pb = pb.count == 0 ? PinBox{1, c.x(), c.x(), c.y(), c.y()}
                         : PinBox{pb.count + 1, std::min(pb.x_lo, c.x()), std::max(pb.x_hi, c.x()),
                                  std::min(pb.y_lo, c.y()), std::max(pb.y_hi, c.y())};
    }
    total += pb.half_perimeter();
  }
  return {ds - ds_, total - hpwl_};
}

std::pair<PlacementState, StepDelta> place(const PlacementState& s, ModuleId module, double x, double y) {
  if (module < 0 || static_cast<std::size_t>(module) >= s.circuit_->size()) {
    throw ValidationError("unknown module " + std::to_string(module));
  }
  if (s.is_placed(module)) throw ValidationError("module " + std::to_string(module) + " is already placed");
  const auto& mod = s.circuit_->module(module);
  const Rect r{x, y, mod.w, mod.h};
  for (auto id : s.placed_) {
    if (rects_overlap(r, s.rect(id))) {
      throw OverlapError("module " + std::to_string(module) + " overlaps module " + std::to_string(id));
    }
  }

  PlacementState next = s;
  next.pos_[static_cast<std::size_t>(module)] = Point(x, y);
  next.placed_.push_back(module);
  next.placed_area_ += mod.area();
  if (s.placed_.empty()) {
    next.bbox_ = {x, y, x + mod.w, y + mod.h};
  } else {
    auto& b = next.bbox_;
    b = {std::min(b.x_min, x), std::min(b.y_min, y), std::max(b.x_max, x + mod.w), std::max(b.y_max, y + mod.h)};
  }
  next.ds_ = next.placed_.size() == 1 ? 0.0 : std::max(0.0, 1.0 - next.placed_area_ / next.bbox_.area());

  const Point c = r.center();
  for (int n : s.topo_->nets_of[static_cast<std::size_t>(module)]) {
    auto& pb = next.pin_boxes_[static_cast<std::size_t>(n)];
    if (pb.count == 0) {
      pb = {1, c.x(), c.x(), c.y(), c.y()};
    } else {
      pb = {pb.count + 1, std::min(pb.x_lo, c.x()), std::max(pb.x_hi, c.x()), std::min(pb.y_lo, c.y()),
            std::max(pb.y_hi, c.y())};
    }
  }
  // Summing per-net contributions in net order matches hpwl() bit for bit.
  double total = 0.0;
  for (const auto& pb : next.pin_boxes_) total += pb.half_perimeter();
  next.hpwl_ = total;

  const StepDelta delta{next.ds_ - s.ds_, next.hpwl_ - s.hpwl_};
  return {std::move(next), delta};
}

double dead_space(const PlacementState& s) {
  if (s.empty()) throw EmptyStateError("dead space of an empty placement");
  if (s.num_placed() == 1) return 0.0;
  double x_lo = std::numeric_limits<double>::infinity(), y_lo = x_lo;
  double x_hi = -x_lo, y_hi = -x_lo;
  double area = 0.0;
  for (auto id : s.placed()) {
    const auto r = s.rect(id);
    x_lo = std::min(x_lo, r.x);
    y_lo = std::min(y_lo, r.y);
    x_hi = std::max(x_hi, r.x + r.w);
    y_hi = std::max(y_hi, r.y + r.h);
    area += r.w * r.h;
  }
  return std::max(0.0, 1.0 - area / ((x_hi - x_lo) * (y_hi - y_lo)));
}

double hpwl(const PlacementState& s) {
  double total = 0.0;
  for (const auto& net : s.circuit().nets) {
    int count = 0;
    double x_lo = std::numeric_limits<double>::infinity(), y_lo = x_lo;
    double x_hi = -x_lo, y_hi = -x_lo;
    for (auto id : net.members) {
      if (!s.is_placed(id)) continue;
      const Point c = s.pin(id);
      ++count;
      x_lo = std::min(x_lo, c.x());
      x_hi = std::max(x_hi, c.x());
      y_lo = std::min(y_lo, c.y());
      y_hi = std::max(y_hi, c.y());
    }
    if (count >= 2) total += (x_hi - x_lo) + (y_hi - y_lo);
  }
  return total;
}

double aspect_ratio(const PlacementState& s) {
  const auto& b = s.bbox();
  return b.width() / b.height();
}

}  // namespace bsfp
