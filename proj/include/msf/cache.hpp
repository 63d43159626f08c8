// On-disk cache of computed objects: one JSON file per entry, addressed by a
// content hash of the key, written atomically via temp-and-rename. Entries
// carry a format version and a payload hash that is verified on read;
// anything stale or corrupt is recomputed and overwritten.
#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>

#include "msf/serialize.hpp"

namespace msf {

inline constexpr int kCacheFormatVersion = 1;

inline uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hex64(uint64_t v) {
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct CacheKey {
  int64_t level = 0;
  int weight = 0;
  int64_t ell = 0;
  std::string character;
  std::string kind;   // "space" | "hecke" | "eigensystems" | "minimality" | ...
  std::string param;  // e.g. the prime for a Hecke matrix

  std::string canonical() const {
    return "v" + std::to_string(kCacheFormatVersion) + "|" + std::to_string(level) + "|" +
           std::to_string(weight) + "|" + std::to_string(ell) + "|" + character + "|" + kind +
           "|" + param;
  }
};

class Cache {
 public:
  // disabled cache when dir is empty
  explicit Cache(std::string dir) : dir_(std::move(dir)) {}

  static std::string default_dir() {
    if (const char* env = std::getenv("MSF_CACHE_DIR")) return env;
    return "";
  }

  bool enabled() const { return !dir_.empty(); }

  // returns the cached payload when the hash verifies, otherwise runs the
  // producer, stores the result atomically, and returns it
  Json get_or_compute(const CacheKey& key, const std::function<Json()>& producer,
                      std::vector<Caveat>* caveats = nullptr) {
    if (!enabled()) return producer();
    namespace fs = std::filesystem;
    fs::path path = entry_path(key);
    if (fs::exists(path)) {
      try {
        std::ifstream in(path);
        Json doc = Json::parse(in);
        if (doc.at("version").get<int>() == kCacheFormatVersion &&
            doc.at("key").get<std::string>() == key.canonical() &&
            doc.at("payload_hash").get<std::string>() ==
                hex64(fnv1a(doc.at("payload").dump()))) {
          return doc.at("payload");
        }
        if (caveats)
          caveats->push_back({"cache-version", "stale cache entry recomputed: " + path.string()});
      } catch (const std::exception&) {
        if (caveats)
          caveats->push_back({"cache-corrupt", "corrupt cache entry recomputed: " + path.string()});
      }
    }
    Json payload = producer();
    write_entry(key, payload);
    return payload;
  }

 private:
  std::filesystem::path entry_path(const CacheKey& key) const {
    namespace fs = std::filesystem;
    fs::path p = fs::path(dir_) / std::to_string(key.ell) / std::to_string(key.level);
    return p / (hex64(fnv1a(key.canonical())) + ".json");
  }

  void write_entry(const CacheKey& key, const Json& payload) const {
    namespace fs = std::filesystem;
    fs::path path = entry_path(key);
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) return;  // cache is best effort
    Json doc{{"version", kCacheFormatVersion},
             {"key", key.canonical()},
             {"payload_hash", hex64(fnv1a(payload.dump()))},
             {"payload", payload}};
    fs::path tmp = path;
    tmp += ".tmp" + std::to_string(::getpid());
    {
      std::ofstream out(tmp);
      out << doc.dump();
    }
    fs::rename(tmp, path, ec);
    if (ec) fs::remove(tmp, ec);
  }

  std::string dir_;
};

// convenience wrapper matching the operation contract
inline Json cache_get_or_compute(Cache& cache, const CacheKey& key,
                                 const std::function<Json()>& producer,
                                 std::vector<Caveat>* caveats = nullptr) {
  return cache.get_or_compute(key, producer, caveats);
}

}  // namespace msf
