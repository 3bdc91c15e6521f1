#include "bsfp/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "bsfp/error.hpp"
#include "bsfp/rng.hpp"

namespace bsfp {

using nlohmann::json;

double Circuit::total_area() const {
  double a = 0.0;
  for (const auto& m : modules) a += m.area();
  return a;
}

void validate(const Circuit& c) {
  const auto m = static_cast<ModuleId>(c.modules.size());
  for (std::size_t i = 0; i < c.modules.size(); ++i) {
    const auto& mod = c.modules[i];
    if (mod.id != static_cast<ModuleId>(i)) {
      std::ostringstream os;
      os << "module at position " << i << " has id " << mod.id << "; ids must be 0..m-1 in file order";
      throw ValidationError(os.str());
    }
    if (!(mod.w > 0.0) || !(mod.h > 0.0) || !std::isfinite(mod.w) || !std::isfinite(mod.h)) {
      throw ValidationError("module " + std::to_string(mod.id) + " has non-positive dimension");
    }
  }
  for (const auto& n : c.nets) {
    if (n.members.size() < 2) {
      throw ValidationError("net " + std::to_string(n.id) + " has fewer than 2 members");
    }
    std::set<ModuleId> seen;
    for (auto id : n.members) {
      if (id < 0 || id >= m) {
        throw ValidationError("net " + std::to_string(n.id) + " references unknown module " + std::to_string(id));
      }
      if (!seen.insert(id).second) {
        throw ValidationError("net " + std::to_string(n.id) + " lists module " + std::to_string(id) + " twice");
      }
    }
  }
  std::set<std::pair<ModuleId, ModuleId>> pairs;
  for (const auto& a : c.alignments) {
    const auto tag = "alignment (" + std::to_string(a.a) + ", " + std::to_string(a.b) + ")";
    if (a.a < 0 || a.a >= m || a.b < 0 || a.b >= m) throw ValidationError(tag + " references unknown module");
    if (a.a == a.b) throw ValidationError(tag + " aligns a module with itself");
    if (!pairs.insert(std::minmax(a.a, a.b)).second) throw ValidationError(tag + " is listed twice");
  }
  if (c.target_ar && !(*c.target_ar > 0.0)) throw ValidationError("target_ar must be positive");
}

namespace {

template <typename T>
T field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(where + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace

Circuit circuit_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("circuit: top level must be an object");
  Circuit c;
  for (const auto& jm : field<json>(j, "modules", "circuit")) {
    c.modules.push_back({field<int>(jm, "id", "module"), field<double>(jm, "w", "module"),
                         field<double>(jm, "h", "module")});
  }
  if (j.contains("nets")) {
    for (const auto& jn : j.at("nets")) {
      c.nets.push_back({field<int>(jn, "id", "net"), field<std::vector<ModuleId>>(jn, "members", "net")});
    }
  }
  if (j.contains("alignments")) {
    for (const auto& ja : j.at("alignments")) {
      auto axis = field<std::string>(ja, "axis", "alignment");
      if (axis != "h" && axis != "v") throw ParseError("alignment: axis must be \"h\" or \"v\"");
      c.alignments.push_back({field<int>(ja, "a", "alignment"), field<int>(ja, "b", "alignment"),
                              axis == "h" ? Axis::Horizontal : Axis::Vertical});
    }
  }
  if (j.contains("target_ar") && !j.at("target_ar").is_null()) c.target_ar = field<double>(j, "target_ar", "circuit");
  validate(c);
  return c;
}

json circuit_to_json(const Circuit& c) {
  json j;
  j["modules"] = json::array();
  for (const auto& m : c.modules) j["modules"].push_back({{"id", m.id}, {"w", m.w}, {"h", m.h}});
  j["nets"] = json::array();
  for (const auto& n : c.nets) j["nets"].push_back({{"id", n.id}, {"members", n.members}});
  j["alignments"] = json::array();
  for (const auto& a : c.alignments) {
    j["alignments"].push_back({{"a", a.a}, {"b", a.b}, {"axis", a.axis == Axis::Horizontal ? "h" : "v"}});
  }
  if (c.target_ar) j["target_ar"] = *c.target_ar;
  return j;
}

Circuit load_circuit(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open circuit file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return circuit_from_json(j);
}

void save_circuit(const Circuit& c, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write circuit file " + path.string());
  out << circuit_to_json(c).dump(2) << '\n';
}

Circuit gen_circuit(std::uint64_t seed, int m, double net_density, int alignments) {
  if (m < 1) throw ValidationError("gen_circuit: module count must be >= 1");
  if (!(net_density > 0.0 && net_density <= 1.0)) throw ValidationError("gen_circuit: net_density must be in (0, 1]");
  Rng rng(mix64(seed));
  const double log_hi = std::log(20.0);
  // Dimensions are rounded to 1/64 so coordinates built from sums stay exact.
  auto dim = [&] { return std::max(1.0, std::round(std::exp(unit_uniform(rng) * log_hi) * 64.0) / 64.0); };

  Circuit c;
  for (int i = 0; i < m; ++i) {
    const double w = dim();
    const double h = dim();
    c.modules.push_back({i, w, h});
  }
  if (m >= 2) {
    const int n_nets = std::max(1, static_cast<int>(std::lround(net_density * m)));
    std::vector<ModuleId> ids(static_cast<std::size_t>(m));
    std::iota(ids.begin(), ids.end(), 0);
    for (int n = 0; n < n_nets; ++n) {
      const int size = std::min(m, 2 + static_cast<int>(uniform_index(rng, 3)));
      // Partial Fisher-Yates for `size` distinct members.
      for (int k = 0; k < size; ++k) {
        auto pick = static_cast<std::size_t>(k) + uniform_index(rng, static_cast<std::size_t>(m - k));
        std::swap(ids[static_cast<std::size_t>(k)], ids[pick]);
      }
      std::vector<ModuleId> members(ids.begin(), ids.begin() + size);
      std::sort(members.begin(), members.end());
      c.nets.push_back({n, std::move(members)});
    }
  }
  std::set<std::pair<ModuleId, ModuleId>> used;
  for (int k = 0, attempts = 0; k < alignments && m >= 2 && attempts < 100 * alignments; ++attempts) {
    auto a = static_cast<ModuleId>(uniform_index(rng, static_cast<std::size_t>(m)));
    auto b = static_cast<ModuleId>(uniform_index(rng, static_cast<std::size_t>(m)));
    if (a == b || !used.insert(std::minmax(a, b)).second) continue;
    c.alignments.push_back({a, b, k % 2 == 0 ? Axis::Vertical : Axis::Horizontal});
    ++k;
  }
  return c;
}

std::vector<ModuleId> placement_order(const Circuit& c) {
  std::vector<ModuleId> order(c.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](ModuleId a, ModuleId b) { return c.module(a).area() > c.module(b).area(); });
  return order;
}

}  // namespace bsfp
