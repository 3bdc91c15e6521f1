#include "bsfp/render.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "bsfp/error.hpp"

namespace bsfp {

namespace {

constexpr double kMargin = 10.0;

const char* const kPalette[] = {"#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462",
                                "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f"};

}  // namespace

std::string render_svg(const PlacementState& s, const RenderOptions& opt) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::fixed << std::setprecision(3);
  if (s.empty()) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 2 * kMargin << "\" height=\"" << 2 * kMargin
       << "\"></svg>\n";
    return os.str();
  }
  const BBox& b = s.bbox();
  const double k = opt.scale;
  auto sx = [&](double x) { return kMargin + (x - b.x_min) * k; };
  auto sy = [&](double y) { return kMargin + (b.y_max - y) * k; };
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << b.width() * k + 2 * kMargin << "\" height=\""
     << b.height() * k + 2 * kMargin << "\">\n";

  for (auto id : s.placed()) {
    const Rect r = s.rect(id);
    os << "  <rect class=\"module\" data-id=\"" << id << "\" x=\"" << sx(r.x) << "\" y=\"" << sy(r.y + r.h)
       << "\" width=\"" << r.w * k << "\" height=\"" << r.h * k << "\" fill=\""
       << kPalette[static_cast<std::size_t>(id) % std::size(kPalette)] << "\" stroke=\"#333\"/>\n";
    const Point c = r.center();
    os << "  <text x=\"" << sx(c.x()) << "\" y=\"" << sy(c.y())
       << "\" font-size=\"10\" text-anchor=\"middle\" dominant-baseline=\"middle\">b" << id << "</text>\n";
  }

  if (opt.congestion_overlay) {
    const auto grid = rudy_grid(s, opt.rudy.grid, opt.rudy.wire_width);
    const double peak = grid.cells.maxCoeff();
    const double cw = b.width() / grid.g * k, ch = b.height() / grid.g * k;
    os << std::setprecision(6);
    for (int r = 0; r < grid.g; ++r) {
      for (int c = 0; c < grid.g; ++c) {
        const double v = grid.cells(r, c);
        if (v <= 0.0) continue;
        os << "  <rect class=\"rudy-cell\" data-row=\"" << r << "\" data-col=\"" << c << "\" data-rudy=\"" << v
           << "\" x=\"" << kMargin + c * cw << "\" y=\"" << kMargin + (grid.g - 1 - r) * ch << "\" width=\"" << cw
           << "\" height=\"" << ch << "\" fill=\"#d7301f\" fill-opacity=\"" << 0.6 * v / peak << "\"/>\n";
      }
    }
    os << std::setprecision(3);
  }

  if (opt.show_nets) {
    for (const auto& net : s.circuit().nets) {
      std::vector<ModuleId> placed;
      std::copy_if(net.members.begin(), net.members.end(), std::back_inserter(placed),
                   [&](ModuleId id) { return s.is_placed(id); });
      if (placed.size() < 2) continue;
      const Point hub = s.pin(placed.front());
      for (std::size_t i = 1; i < placed.size(); ++i) {
        const Point p = s.pin(placed[i]);
        os << "  <line class=\"net\" data-net=\"" << net.id << "\" x1=\"" << sx(hub.x()) << "\" y1=\"" << sy(hub.y())
           << "\" x2=\"" << sx(p.x()) << "\" y2=\"" << sy(p.y()) << "\" stroke=\"#1f78b4\" stroke-width=\"1\"/>\n";
      }
    }
  }
  os << "</svg>\n";
  return os.str();
}

nlohmann::json floorplan_to_json(const PlacementState& s) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t id = 0; id < s.circuit().size(); ++id) {
    const auto& p = s.position(static_cast<ModuleId>(id));
    if (p) j[std::to_string(id)] = {{"x", p->x()}, {"y", p->y()}};
  }
  return j;
}

PlacementState floorplan_from_json(const nlohmann::json& j, std::shared_ptr<const Circuit> circuit) {
  if (!j.is_object()) throw ParseError("floorplan: top level must be an object");
  std::vector<std::pair<ModuleId, Point>> entries;
  for (const auto& [key, val] : j.items()) {
    ModuleId id = -1;
    try {
      std::size_t used = 0;
      id = std::stoi(key, &used);
      if (used != key.size()) id = -1;
    } catch (const std::exception&) {
    }
    if (id < 0 || static_cast<std::size_t>(id) >= circuit->size()) {
      throw ValidationError("floorplan module '" + key + "' is not in the circuit");
    }
    if (!val.contains("x") || !val.contains("y")) throw ParseError("floorplan module " + key + ": missing x or y");
    entries.emplace_back(id, Point(val.at("x").get<double>(), val.at("y").get<double>()));
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  PlacementState s(std::move(circuit));
  for (const auto& [id, p] : entries) s = place(s, id, p.x(), p.y()).first;
  return s;
}

}  // namespace bsfp
