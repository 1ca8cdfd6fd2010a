#pragma once

// Persistent store of exact g_k(n) values with witnesses.
//
// File layout (JSON):
//   {"format": "apfree-gcache", "version": 1,
//    "entries": [{"k": 3, "n": 5, "value": 4, "witness": ["1","2","4","5"]}, ...]}

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "apfree/apcore.hpp"

namespace apfree {

struct GCacheEntry {
  unsigned k = 3;
  std::size_t n = 0;
  std::size_t value = 0;
  IntSet witness;
};

/// An entry is usable when its witness is a k-AP-free subset of [1, n] of
/// size `value`.
bool is_consistent(const GCacheEntry& entry);

class GCache {
 public:
  std::optional<GCacheEntry> find(unsigned k, std::size_t n) const;
  void put(GCacheEntry entry);
  void erase(unsigned k);

  const std::map<std::pair<unsigned, std::size_t>, GCacheEntry>& entries() const {
    return entries_;
  }
  bool dirty() const noexcept { return dirty_; }
  void mark_clean() noexcept { dirty_ = false; }

  void warn(std::string message) { warnings_.push_back(std::move(message)); }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  std::map<std::pair<unsigned, std::size_t>, GCacheEntry> entries_;
  std::vector<std::string> warnings_;
  bool dirty_ = false;
};

/// Missing file gives an empty cache; unreadable or inconsistent entries are
/// dropped with a warning.
GCache cache_load(const std::filesystem::path& path);

/// Write-temp-then-rename. On failure records a warning and returns false.
bool cache_store(const std::filesystem::path& path, GCache& cache);

}  // namespace apfree
