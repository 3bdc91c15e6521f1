#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace bsfp {

using ModuleId = int;

/// Rectangular block; (w, h) in length units, positions are assigned by a placement.
struct Module {
  ModuleId id = 0;
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }
  bool operator==(const Module&) const = default;
};

/// Pins sit at member-module centers.
struct Net {
  int id = 0;
  std::vector<ModuleId> members;

  bool operator==(const Net&) const = default;
};

/// Vertical alignment stacks the pair on a common center x; Horizontal shares center y.
enum class Axis { Horizontal, Vertical };

struct AlignmentConstraint {
  ModuleId a = 0;
  ModuleId b = 0;
  Axis axis = Axis::Vertical;

  bool operator==(const AlignmentConstraint&) const = default;
};

struct Circuit {
  std::vector<Module> modules;  // modules[i].id == i
  std::vector<Net> nets;
  std::vector<AlignmentConstraint> alignments;
  std::optional<double> target_ar;

  std::size_t size() const { return modules.size(); }
  const Module& module(ModuleId id) const { return modules.at(static_cast<std::size_t>(id)); }
  double total_area() const;

  bool operator==(const Circuit&) const = default;
};

/// Throws ValidationError naming the first offending entity.
void validate(const Circuit& c);

Circuit circuit_from_json(const nlohmann::json& j);
nlohmann::json circuit_to_json(const Circuit& c);

Circuit load_circuit(const std::filesystem::path& path);
void save_circuit(const Circuit& c, const std::filesystem::path& path);

/// Deterministic synthetic instance. Dimensions are log-uniform in [1, 20],
/// round(net_density * m) nets of 2..4 distinct members, and `alignments`
/// random module pairs with alternating axes.
Circuit gen_circuit(std::uint64_t seed, int m, double net_density, int alignments = 0);

/// Descending area, ties by ascending id.
std::vector<ModuleId> placement_order(const Circuit& c);

}  // namespace bsfp
