#include "asal/embedding/embedder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace asal {

double EmbeddingVector::norm() const {
  double s = 0;
  for (float v : values) s += static_cast<double>(v) * v;
  return std::sqrt(s);
}

EmbeddingVector EmbeddingVector::normalized(std::vector<float> raw) {
  double s = 0;
  for (float v : raw) s += static_cast<double>(v) * v;
  EmbeddingVector out{std::move(raw)};
  if (s == 0.0 || !std::isfinite(s)) {
    std::fill(out.values.begin(), out.values.end(), 0.0f);
    if (!out.values.empty()) out.values[0] = 1.0f;
    return out;
  }
  const double inv = 1.0 / std::sqrt(s);
  for (float& v : out.values) v = static_cast<float>(v * inv);
  return out;
}

double similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("embedding dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()));
  double s = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += static_cast<double>(a.values[i]) * b.values[i];
  return std::clamp(s, -1.0, 1.0);
}

EmbeddingVector Embedder::embed_image(const Frame& frame) {
  return std::move(embed_images(std::span<const Frame>(&frame, 1)).front());
}

}  // namespace asal
