#pragma once

// Content-addressed JSON cache. Writes go to a temp file in the same
// directory and are renamed into place.

#include "rwreath/serialize.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace rwreath {

class CacheStore {
 public:
  CacheStore() = default;  // disabled
  explicit CacheStore(std::filesystem::path root, bool verbose = false)
      : root_(std::move(root)), enabled_(true), verbose_(verbose) {}

  bool enabled() const { return enabled_; }
  const std::filesystem::path& root() const { return root_; }
  void set_verbose(bool v) { verbose_ = v; }

  std::optional<Json> load(const std::string& name) const {
    if (!enabled_) return std::nullopt;
    std::filesystem::path path = root_ / name;
    std::ifstream in(path);
    if (!in) return std::nullopt;
    try {
      Json j = Json::parse(in);
      if (verbose_) std::cerr << "[cache] hit " << path.string() << "\n";
      return j;
    } catch (const std::exception&) {
      if (verbose_) std::cerr << "[cache] unreadable entry ignored: " << path.string() << "\n";
      return std::nullopt;
    }
  }

  void store(const std::string& name, const Json& payload) const {
    if (!enabled_) return;
    std::error_code ec;
    std::filesystem::create_directories(root_, ec);
    std::filesystem::path path = root_ / name;
    std::filesystem::path tmp = root_ / (name + ".tmp");
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) throw UsageError("cannot write cache file: " + tmp.string());
      out << payload.dump(1) << "\n";
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw UsageError("cannot publish cache file: " + path.string());
    if (verbose_) std::cerr << "[cache] store " << path.string() << "\n";
  }

 private:
  std::filesystem::path root_;
  bool enabled_ = false;
  bool verbose_ = false;
};

}  // namespace rwreath
