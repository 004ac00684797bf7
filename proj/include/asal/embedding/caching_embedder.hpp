#pragma once

#include <cstdint>
#include <mutex>
#include <unordered_map>

#include "asal/embedding/embedder.hpp"

namespace asal {

/// Memoises image embeddings by frame digest. Text calls pass through.
class CachingEmbedder final : public Embedder {
 public:
  explicit CachingEmbedder(Embedder& inner, std::size_t max_entries = 1 << 16)
      : inner_(inner), name_(inner.describe().name), max_entries_(max_entries) {}

  EmbedderDescriptor describe() const override { return inner_.describe(); }
  std::vector<EmbeddingVector> embed_images(std::span<const Frame> frames) override;
  EmbeddingVector embed_text(std::string_view prompt) override { return inner_.embed_text(prompt); }

  std::size_t hits() const;
  std::size_t misses() const;

 private:
  Embedder& inner_;
  std::string name_;
  std::size_t max_entries_;
  mutable std::mutex mutex_;
  std::unordered_map<std::uint64_t, EmbeddingVector> cache_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

}  // namespace asal
