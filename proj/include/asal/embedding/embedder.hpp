#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asal/core/types.hpp"

namespace asal {

/// Unit-norm embedding of an image or a prompt.
struct EmbeddingVector {
  std::vector<float> values;

  std::size_t dim() const { return values.size(); }
  double norm() const;
  /// Scales to unit length. A zero vector becomes the first basis vector.
  static EmbeddingVector normalized(std::vector<float> raw);
  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;
};

/// Inner product, clamped to [-1, 1] to absorb float rounding in unit vectors.
/// Throws std::invalid_argument on a dimension mismatch.
double similarity(const EmbeddingVector& a, const EmbeddingVector& b);

struct EmbedderDescriptor {
  std::string name;
  std::size_t dim = 0;
  bool supports_text = false;
};

/// Implementations must be safe to call from several workers at once.
class Embedder {
 public:
  virtual ~Embedder() = default;

  virtual EmbedderDescriptor describe() const = 0;
  /// Results are aligned with `frames`.
  virtual std::vector<EmbeddingVector> embed_images(std::span<const Frame> frames) = 0;
  virtual EmbeddingVector embed_text(std::string_view prompt) = 0;

  EmbeddingVector embed_image(const Frame& frame);
};

}  // namespace asal
