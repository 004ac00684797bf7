#pragma once

#include "asal/embedding/embedder.hpp"

namespace asal {

/// Low-level baseline: box-average the frame down to grid x grid x 3,
/// flatten, subtract the mean, L2-normalise. Constant frames map to the
/// first basis vector.
class PixelEmbedder final : public Embedder {
 public:
  explicit PixelEmbedder(int grid = 8) : grid_(grid) {}

  EmbedderDescriptor describe() const override;
  std::vector<EmbeddingVector> embed_images(std::span<const Frame> frames) override;
  /// Always throws CapabilityMissing.
  EmbeddingVector embed_text(std::string_view prompt) override;

  EmbeddingVector embed(const Frame& frame) const;

 private:
  int grid_;
};

}  // namespace asal
