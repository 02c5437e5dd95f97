#pragma once

#include <chrono>
#include <cstddef>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "subring/records.hpp"

namespace subring {

/// Append-only JSON-lines store of CountRecords keyed by
/// (n, k, r, method, engine version).
///
/// Lines written by another engine version stay in the file but are never
/// returned. `flush()` rewrites the file through a temporary and a rename, so
/// readers see either the old or the new contents.
class ResultCache {
 public:
  using Key = std::tuple<std::size_t, std::size_t, Int, Method>;

  struct Entry {
    CountRecord record;
    std::string created_at;
  };

  ResultCache() = default;  // no backing file: every lookup misses

  explicit ResultCache(std::filesystem::path path, std::string version = std::string(kEngineVersion))
      : path_(std::move(path)), version_(std::move(version)) {
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      lines_.push_back(line);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception&) {
        continue;  // torn or foreign line; keep it verbatim, ignore it
      }
      CountRecord rec;
      try {
        rec = count_record_from_json(j);
      } catch (const std::exception&) {
        continue;
      }
      if (rec.engine_version != version_) continue;
      index_.try_emplace(key_of(rec), Entry{rec, j.value("created_at", "")});
    }
  }

  bool enabled() const { return !path_.empty(); }
  std::size_t size() const { return index_.size(); }

  std::optional<Entry> lookup(std::size_t n, std::size_t k, Int r, Method method) const {
    auto it = index_.find(Key{n, k, r, method});
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Records a freshly computed count. Existing keys are immutable.
  void insert(CountRecord rec) {
    if (!enabled()) return;
    rec.engine_version = version_;
    const Key key = key_of(rec);
    if (index_.contains(key)) return;
    const std::string stamp = now_iso8601();
    auto j = to_json(rec);
    j["created_at"] = stamp;
    lines_.push_back(j.dump());
    index_.emplace(key, Entry{std::move(rec), stamp});
    dirty_ = true;
  }

  void flush() {
    if (!enabled() || !dirty_) return;
    std::filesystem::path tmp = path_;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
      for (const auto& l : lines_) out << l << '\n';
      out.flush();
      if (!out) throw std::runtime_error("short write to cache file " + tmp.string());
    }
    std::filesystem::rename(tmp, path_);
    dirty_ = false;
  }

 private:
  static Key key_of(const CountRecord& rec) { return {rec.n, rec.k, rec.r, rec.method}; }

  static std::string now_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    const auto us = std::chrono::duration_cast<std::chrono::microseconds>(now.time_since_epoch()).count() % 1000000;
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[40];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
    char out[64];
    std::snprintf(out, sizeof out, "%s.%06lldZ", buf, static_cast<long long>(us));
    return out;
  }

  std::filesystem::path path_;
  std::string version_{kEngineVersion};
  std::vector<std::string> lines_;
  std::map<Key, Entry> index_;
  bool dirty_ = false;
};

}  // namespace subring
