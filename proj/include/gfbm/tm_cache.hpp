#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "gfbm/sampled.hpp"

namespace gfbm {

/// Persistent store of T_m h~_k / b_k samples for one (density, convention).
///
/// File layout (little endian):
///   header: magic "GFBMTMC1" (8 bytes), u32 version, u64 density hash,
///           u32 convention
///   record: u32 quantity (0 = T_m h~_k, 1 = b_k), u32 k,
///           f64 grid start, f64 grid step, u64 count,
///           count x f64 values, u64 FNV-1a checksum of the values
/// A file with a different header, a truncated record or a bad checksum is
/// discarded and rebuilt.
class TmCache {
 public:
  enum class Quantity : std::uint32_t { tm = 0, b = 1 };

  static constexpr std::uint32_t kVersion = 1;

  TmCache(std::string path, std::uint64_t density_hash, Convention conv);

  /// Reads the file. Returns false (and starts empty) if it is missing or
  /// unusable; never throws for corrupt content.
  bool load();
  /// Rewrites the whole file.
  void save() const;

  std::optional<std::vector<double>> find(Quantity q, int k, const Grid& grid) const;
  void insert(Quantity q, int k, const Grid& grid, std::vector<double> values);

  std::size_t size() const;
  std::uint64_t density_hash() const { return density_hash_; }
  Convention convention() const { return convention_; }
  const std::string& path() const { return path_; }
  /// True if the last load() found a file but had to discard it.
  bool rebuilt() const { return rebuilt_; }

 private:
  using Key = std::tuple<std::uint32_t, int, double, double, std::size_t>;

  std::string path_;
  std::uint64_t density_hash_;
  Convention convention_;
  bool rebuilt_ = false;
  mutable std::mutex mutex_;
  std::map<Key, std::vector<double>> records_;
};

std::uint64_t fnv1a(const void* data, std::size_t size,
                    std::uint64_t seed = 0xcbf29ce484222325ull);

}  // namespace gfbm
