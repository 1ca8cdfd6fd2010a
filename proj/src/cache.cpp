#include "apfree/cache.hpp"

#include <fstream>
#include <system_error>

#include <json.hpp>

namespace apfree {

using nlohmann::json;

bool is_consistent(const GCacheEntry& entry) {
  if (entry.k < 3 || entry.witness.size() != entry.value) return false;
  if (!entry.witness.empty() &&
      (entry.witness.min() < 1 || entry.witness.max() > Int(static_cast<unsigned long>(entry.n)))) {
    return false;
  }
  return is_progression_free(entry.witness, entry.k);
}

std::optional<GCacheEntry> GCache::find(unsigned k, std::size_t n) const {
  auto it = entries_.find({k, n});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void GCache::put(GCacheEntry entry) {
  auto key = std::make_pair(entry.k, entry.n);
  entries_[key] = std::move(entry);
  dirty_ = true;
}

void GCache::erase(unsigned k) {
  std::erase_if(entries_, [k](const auto& kv) { return kv.first.first == k; });
  dirty_ = true;
}

GCache cache_load(const std::filesystem::path& path) {
  GCache cache;
  std::ifstream in(path);
  if (!in) return cache;

  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    cache.warn("cache " + path.string() + " unreadable, ignoring it: " + e.what());
    return cache;
  }
  if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array()) {
    cache.warn("cache " + path.string() + " has no entry list, ignoring it");
    return cache;
  }
  std::size_t index = 0;
  for (const auto& item : doc["entries"]) {
    const std::string where = "cache entry " + std::to_string(index++);
    try {
      GCacheEntry entry;
      entry.k = item.at("k").get<unsigned>();
      entry.n = item.at("n").get<std::size_t>();
      entry.value = item.at("value").get<std::size_t>();
      std::vector<Int> witness;
      for (const auto& w : item.at("witness")) witness.push_back(parse_int(w.get<std::string>()));
      entry.witness = IntSet(std::move(witness));
      if (!is_consistent(entry)) {
        cache.warn(where + " (k=" + std::to_string(entry.k) + ", n=" + std::to_string(entry.n) +
                   ") has an invalid witness, dropped");
        continue;
      }
      cache.put(std::move(entry));
    } catch (const std::exception& e) {
      cache.warn(where + " malformed, dropped: " + e.what());
    }
  }
  cache.mark_clean();
  return cache;
}

bool cache_store(const std::filesystem::path& path, GCache& cache) {
  json entries = json::array();
  for (const auto& [key, entry] : cache.entries()) {
    json witness = json::array();
    for (const auto& w : entry.witness) witness.push_back(w.get_str());
    entries.push_back(
        {{"k", entry.k}, {"n", entry.n}, {"value", entry.value}, {"witness", std::move(witness)}});
  }
  json doc = {{"format", "apfree-gcache"}, {"version", 1}, {"entries", std::move(entries)}};

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out || !(out << doc.dump(1) << '\n')) {
      cache.warn("cannot write cache " + path.string() + ", continuing without it");
      return false;
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    cache.warn("cannot replace cache " + path.string() + ", continuing without it");
    return false;
  }
  cache.mark_clean();
  return true;
}

}  // namespace apfree
