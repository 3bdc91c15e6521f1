#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace bsfp {

/// Metrics of one floorplanning run, serialized as one JSON line.
struct RunRecord {
  std::string algo;
  std::string circuit;
  double runtime_s = 0.0;
  double ds = 0.0;  // percent
  double hpwl = 0.0;
  double rudy = 0.0;
  double reward = 0.0;  // episode return R
  std::uint64_t seed = 0;
  std::size_t congestion_fallbacks = 0;
  bool feasible = true;
  std::string error;
  nlohmann::json params = nlohmann::json::object();
};

nlohmann::json to_json(const RunRecord& r);
RunRecord run_record_from_json(const nlohmann::json& j);

}  // namespace bsfp
