#include "asal/embedding/pixel_embedder.hpp"

#include "asal/core/errors.hpp"
#include "asal/core/image.hpp"

namespace asal {

EmbedderDescriptor PixelEmbedder::describe() const {
  return {"pixel" + std::to_string(grid_), static_cast<std::size_t>(grid_) * grid_ * 3, false};
}

EmbeddingVector PixelEmbedder::embed(const Frame& frame) const {
  std::vector<float> raw(static_cast<std::size_t>(grid_) * grid_ * 3);
  if (frame.height % grid_ == 0 && frame.width % grid_ == 0) {
    // Exact integer boxes: plain sums, no area weights.
    const int bh = frame.height / grid_, bw = frame.width / grid_;
    std::vector<double> acc(raw.size(), 0.0);
    for (int y = 0; y < frame.height; ++y) {
      const float* row = &frame.pixels[static_cast<std::size_t>(y) * frame.width * 3];
      double* out = &acc[static_cast<std::size_t>(y / bh) * grid_ * 3];
      for (int x = 0; x < frame.width; ++x) {
        double* cell = out + (x / bw) * 3;
        cell[0] += row[x * 3];
        cell[1] += row[x * 3 + 1];
        cell[2] += row[x * 3 + 2];
      }
    }
    const double inv = 1.0 / (static_cast<double>(bh) * bw);
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = static_cast<float>(acc[i] * inv);
  } else {
    const Frame small = resample_box(frame, grid_, grid_);
    raw = small.pixels;
  }
  double mean = 0;
  for (float v : raw) mean += v;
  mean /= static_cast<double>(raw.size());
  for (float& v : raw) v = static_cast<float>(v - mean);
  // Constant frames leave float dust after the subtraction; treat as zero.
  double energy = 0;
  for (float v : raw) energy += static_cast<double>(v) * v;
  if (energy < 1e-12 * static_cast<double>(raw.size())) std::fill(raw.begin(), raw.end(), 0.0f);
  return EmbeddingVector::normalized(std::move(raw));
}

std::vector<EmbeddingVector> PixelEmbedder::embed_images(std::span<const Frame> frames) {
  std::vector<EmbeddingVector> out;
  out.reserve(frames.size());
  for (const Frame& f : frames) out.push_back(embed(f));
  return out;
}

EmbeddingVector PixelEmbedder::embed_text(std::string_view) {
  throw CapabilityMissing("pixel embedder cannot embed text");
}

}  // namespace asal
