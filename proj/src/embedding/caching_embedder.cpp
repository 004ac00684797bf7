#include "asal/embedding/caching_embedder.hpp"

#include <functional>

#include "asal/core/rng.hpp"

namespace asal {

std::vector<EmbeddingVector> CachingEmbedder::embed_images(std::span<const Frame> frames) {
  const std::uint64_t backend = std::hash<std::string>{}(name_);
  std::vector<std::uint64_t> keys(frames.size());
  std::vector<EmbeddingVector> out(frames.size());
  std::vector<Frame> missing;
  std::vector<std::size_t> missing_slots;
  {
    std::lock_guard lock(mutex_);
    for (std::size_t i = 0; i < frames.size(); ++i) {
      keys[i] = mix64(backend ^ frames[i].digest());
      const auto it = cache_.find(keys[i]);
      if (it != cache_.end()) {
        out[i] = it->second;
        ++hits_;
      } else {
        missing.push_back(frames[i]);
        missing_slots.push_back(i);
        ++misses_;
      }
    }
  }
  if (missing.empty()) return out;
  auto fresh = inner_.embed_images(missing);
  std::lock_guard lock(mutex_);
  if (cache_.size() + fresh.size() > max_entries_) cache_.clear();
  for (std::size_t k = 0; k < fresh.size(); ++k) {
    cache_.emplace(keys[missing_slots[k]], fresh[k]);
    out[missing_slots[k]] = std::move(fresh[k]);
  }
  return out;
}

std::size_t CachingEmbedder::hits() const {
  std::lock_guard lock(mutex_);
  return hits_;
}

std::size_t CachingEmbedder::misses() const {
  std::lock_guard lock(mutex_);
  return misses_;
}

}  // namespace asal
