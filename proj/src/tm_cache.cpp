#include "gfbm/tm_cache.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>

#include "gfbm/error.hpp"

namespace gfbm {

namespace {

constexpr char kMagic[8] = {'G', 'F', 'B', 'M', 'T', 'M', 'C', '1'};

template <typename T>
void put(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
bool get(std::istream& in, T& value) {
  return static_cast<bool>(in.read(reinterpret_cast<char*>(&value), sizeof(T)));
}

}  // namespace

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

TmCache::TmCache(std::string path, std::uint64_t density_hash, Convention conv)
    : path_(std::move(path)), density_hash_(density_hash), convention_(conv) {}

bool TmCache::load() {
  std::lock_guard lock(mutex_);
  records_.clear();
  rebuilt_ = false;
  std::ifstream in(path_, std::ios::binary);
  if (!in) return false;

  auto discard = [&] {
    records_.clear();
    rebuilt_ = true;
    return false;
  };

  char magic[8];
  std::uint32_t version = 0;
  std::uint64_t hash = 0;
  std::uint32_t conv = 0;
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) return discard();
  if (!get(in, version) || version != kVersion) return discard();
  if (!get(in, hash) || hash != density_hash_) return discard();
  if (!get(in, conv) || conv != static_cast<std::uint32_t>(convention_)) return discard();

  const auto file_size = std::filesystem::file_size(path_);
  while (in.peek() != std::char_traits<char>::eof()) {
    std::uint32_t quantity = 0;
    std::uint32_t k = 0;
    double start = 0.0;
    double step = 0.0;
    std::uint64_t count = 0;
    if (!get(in, quantity) || !get(in, k) || !get(in, start) || !get(in, step) || !get(in, count)) {
      return discard();
    }
    if (quantity > 1 || count > file_size / sizeof(double)) return discard();
    std::vector<double> values(count);
    if (!in.read(reinterpret_cast<char*>(values.data()),
                 static_cast<std::streamsize>(count * sizeof(double)))) {
      return discard();
    }
    std::uint64_t checksum = 0;
    if (!get(in, checksum) || checksum != fnv1a(values.data(), count * sizeof(double))) {
      return discard();
    }
    records_[{quantity, static_cast<int>(k), start, step, static_cast<std::size_t>(count)}] =
        std::move(values);
  }
  return true;
}

void TmCache::save() const {
  std::lock_guard lock(mutex_);
  const std::filesystem::path target(path_);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  const std::string tmp = path_ + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write T_m cache '" + tmp + "'");
    out.write(kMagic, sizeof kMagic);
    put(out, kVersion);
    put(out, density_hash_);
    put(out, static_cast<std::uint32_t>(convention_));
    for (const auto& [key, values] : records_) {
      const auto& [quantity, k, start, step, count] = key;
      put(out, quantity);
      put(out, static_cast<std::uint32_t>(k));
      put(out, start);
      put(out, step);
      put(out, static_cast<std::uint64_t>(count));
      out.write(reinterpret_cast<const char*>(values.data()),
                static_cast<std::streamsize>(values.size() * sizeof(double)));
      put(out, fnv1a(values.data(), values.size() * sizeof(double)));
    }
    if (!out) throw ConfigError("failed writing T_m cache '" + tmp + "'");
  }
  std::filesystem::rename(tmp, target);
}

std::optional<std::vector<double>> TmCache::find(Quantity q, int k, const Grid& grid) const {
  std::lock_guard lock(mutex_);
  const auto it = records_.find({static_cast<std::uint32_t>(q), k, grid.start, grid.step, grid.count});
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

void TmCache::insert(Quantity q, int k, const Grid& grid, std::vector<double> values) {
  if (values.size() != grid.count) throw DomainError("cache record size does not match its grid");
  std::lock_guard lock(mutex_);
  records_[{static_cast<std::uint32_t>(q), k, grid.start, grid.step, grid.count}] = std::move(values);
}

std::size_t TmCache::size() const {
  std::lock_guard lock(mutex_);
  return records_.size();
}

}  // namespace gfbm
