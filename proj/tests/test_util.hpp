#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <string>

#include "bsfp/circuit.hpp"

namespace bsfp::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("bsfp-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path file(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::shared_ptr<const Circuit> share(Circuit c) { return std::make_shared<const Circuit>(std::move(c)); }

/// Circuit of the given module sizes and nets, no alignments.
inline std::shared_ptr<const Circuit> make_circuit(std::initializer_list<std::pair<double, double>> dims,
                                                   std::initializer_list<std::vector<ModuleId>> nets = {}) {
  Circuit c;
  int id = 0;
  for (auto [w, h] : dims) c.modules.push_back({id++, w, h});
  int nid = 0;
  for (const auto& n : nets) c.nets.push_back({nid++, n});
  return share(std::move(c));
}

}  // namespace bsfp::testing
