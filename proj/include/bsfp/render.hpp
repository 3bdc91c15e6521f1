#pragma once

#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "bsfp/congestion.hpp"

namespace bsfp {

struct RenderOptions {
  double scale = 20.0;  // pixels per length unit
  bool show_nets = false;
  bool congestion_overlay = false;
  RudyOptions rudy;
};

/// Deterministic SVG: one <rect class="module"> per placed module with an id
/// label, optional star-shaped net flylines between pin centers, optional
/// RUDY heat cells (<rect class="rudy-cell">, opacity proportional to value).
std::string render_svg(const PlacementState& s, const RenderOptions& opt = {});

/// Floorplan file: {"<module id>": {"x": .., "y": ..}, ...}.
nlohmann::json floorplan_to_json(const PlacementState& s);

/// Rebuilds a placement; throws ValidationError for modules unknown to the
/// circuit and OverlapError for overlapping coordinates.
PlacementState floorplan_from_json(const nlohmann::json& j, std::shared_ptr<const Circuit> circuit);

}  // namespace bsfp
