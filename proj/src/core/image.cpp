#include "asal/core/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <stdexcept>

#include "asal/core/errors.hpp"

namespace asal {

Frame resample_nearest(const Frame& src, int out_h, int out_w) {
  if (src.height == out_h && src.width == out_w) return src;
  Frame out(out_h, out_w);
  out.step_index = src.step_index;
  for (int y = 0; y < out_h; ++y) {
    const int sy = static_cast<int>(static_cast<long long>(y) * src.height / out_h);
    for (int x = 0; x < out_w; ++x) {
      const int sx = static_cast<int>(static_cast<long long>(x) * src.width / out_w);
      for (int c = 0; c < 3; ++c) out.at(y, x, c) = src.at(sy, sx, c);
    }
  }
  return out;
}

Frame resample_box(const Frame& src, int out_h, int out_w) {
  Frame out(out_h, out_w);
  out.step_index = src.step_index;
  const double sy = static_cast<double>(src.height) / out_h;
  const double sx = static_cast<double>(src.width) / out_w;
  for (int oy = 0; oy < out_h; ++oy) {
    const double y0 = oy * sy, y1 = (oy + 1) * sy;
    for (int ox = 0; ox < out_w; ++ox) {
      const double x0 = ox * sx, x1 = (ox + 1) * sx;
      double acc[3] = {0, 0, 0};
      double area = 0;
      for (int y = static_cast<int>(std::floor(y0)); y < static_cast<int>(std::ceil(y1)); ++y) {
        const double wy = std::min<double>(y + 1, y1) - std::max<double>(y, y0);
        for (int x = static_cast<int>(std::floor(x0)); x < static_cast<int>(std::ceil(x1)); ++x) {
          const double w = wy * (std::min<double>(x + 1, x1) - std::max<double>(x, x0));
          for (int c = 0; c < 3; ++c) acc[c] += w * src.at(y, x, c);
          area += w;
        }
      }
      for (int c = 0; c < 3; ++c) out.at(oy, ox, c) = static_cast<float>(acc[c] / area);
    }
  }
  return out;
}

namespace {

void png_write_to_vector(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

struct ReadCursor {
  const std::vector<std::uint8_t>* bytes;
  std::size_t offset;
};

void png_read_from_vector(png_structp png, png_bytep data, png_size_t length) {
  auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cur->offset + length > cur->bytes->size()) png_error(png, "truncated PNG");
  std::memcpy(data, cur->bytes->data() + cur->offset, length);
  cur->offset += length;
}

[[noreturn]] void png_throw(png_structp, png_const_charp msg) { throw Error(std::string("png: ") + msg); }

std::uint8_t to_byte(float v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
}

}  // namespace

std::vector<std::uint8_t> encode_png(const Frame& frame) {
  std::vector<std::uint8_t> out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_throw, nullptr);
  png_infop info = png_create_info_struct(png);
  try {
    png_set_write_fn(png, &out, png_write_to_vector, nullptr);
    png_set_IHDR(png, info, frame.width, frame.height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<std::uint8_t> row(static_cast<std::size_t>(frame.width) * 3);
    for (int y = 0; y < frame.height; ++y) {
      for (int i = 0; i < frame.width * 3; ++i) row[i] = to_byte(frame.pixels[static_cast<std::size_t>(y) * frame.width * 3 + i]);
      png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
  } catch (...) {
    png_destroy_write_struct(&png, &info);
    throw;
  }
  png_destroy_write_struct(&png, &info);
  return out;
}

Frame decode_png(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) throw Error("png: bad signature");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_throw, nullptr);
  png_infop info = png_create_info_struct(png);
  Frame frame;
  ReadCursor cur{&bytes, 0};
  try {
    png_set_read_fn(png, &cur, png_read_from_vector);
    png_read_info(png, info);
    png_set_expand(png);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_set_gray_to_rgb(png);
    png_read_update_info(png, info);
    const int w = static_cast<int>(png_get_image_width(png, info));
    const int h = static_cast<int>(png_get_image_height(png, info));
    frame = Frame(h, w);
    std::vector<std::uint8_t> row(png_get_rowbytes(png, info));
    for (int y = 0; y < h; ++y) {
      png_read_row(png, row.data(), nullptr);
      for (int i = 0; i < w * 3; ++i) frame.pixels[static_cast<std::size_t>(y) * w * 3 + i] = row[i] / 255.0f;
    }
  } catch (...) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw;
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return frame;
}

void write_png(const std::filesystem::path& path, const Frame& frame) {
  const auto bytes = encode_png(frame);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

Frame read_png(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_png(bytes);
}

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  static constexpr char kTable[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += kTable[(v >> 18) & 63];
    out += kTable[(v >> 12) & 63];
    out += kTable[(v >> 6) & 63];
    out += kTable[v & 63];
  }
  if (i < bytes.size()) {
    std::uint32_t v = bytes[i] << 16;
    if (i + 1 < bytes.size()) v |= bytes[i + 1] << 8;
    out += kTable[(v >> 18) & 63];
    out += kTable[(v >> 12) & 63];
    out += (i + 1 < bytes.size()) ? kTable[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

void fill_disc(Frame& frame, double cy, double cx, double radius, const Rgb& color) {
  const int y0 = std::max(0, static_cast<int>(std::floor(cy - radius)));
  const int y1 = std::min(frame.height - 1, static_cast<int>(std::ceil(cy + radius)));
  const int x0 = std::max(0, static_cast<int>(std::floor(cx - radius)));
  const int x1 = std::min(frame.width - 1, static_cast<int>(std::ceil(cx + radius)));
  const double r2 = radius * radius;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double dy = y + 0.5 - cy, dx = x + 0.5 - cx;
      if (dy * dy + dx * dx <= r2)
        for (int c = 0; c < 3; ++c) frame.at(y, x, c) = color[c];
    }
  }
}

void fill_triangle(Frame& frame, const std::array<double, 2>& a, const std::array<double, 2>& b,
                   const std::array<double, 2>& c, const Rgb& color) {
  // Points are (y, x). Pixel centres inside all three half-planes are filled.
  const double ymin = std::min({a[0], b[0], c[0]}), ymax = std::max({a[0], b[0], c[0]});
  const double xmin = std::min({a[1], b[1], c[1]}), xmax = std::max({a[1], b[1], c[1]});
  const auto edge = [](const std::array<double, 2>& p, const std::array<double, 2>& q, double y, double x) {
    return (q[1] - p[1]) * (y - p[0]) - (q[0] - p[0]) * (x - p[1]);
  };
  const double area = edge(a, b, c[0], c[1]);
  if (area == 0.0) return;
  for (int y = std::max(0, static_cast<int>(std::floor(ymin))); y <= std::min(frame.height - 1, static_cast<int>(ymax)); ++y) {
    for (int x = std::max(0, static_cast<int>(std::floor(xmin))); x <= std::min(frame.width - 1, static_cast<int>(xmax)); ++x) {
      const double py = y + 0.5, px = x + 0.5;
      const double e0 = edge(a, b, py, px), e1 = edge(b, c, py, px), e2 = edge(c, a, py, px);
      const bool inside = area > 0 ? (e0 >= 0 && e1 >= 0 && e2 >= 0) : (e0 <= 0 && e1 <= 0 && e2 <= 0);
      if (inside)
        for (int k = 0; k < 3; ++k) frame.at(y, x, k) = color[k];
    }
  }
}

void draw_line(Frame& frame, int y0, int x0, int y1, int x1, const Rgb& color) {
  const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
  const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  while (true) {
    if (y0 >= 0 && y0 < frame.height && x0 >= 0 && x0 < frame.width)
      for (int c = 0; c < 3; ++c) frame.at(y0, x0, c) = color[c];
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) { err += dy; x0 += sx; }
    if (e2 <= dx) { err += dx; y0 += sy; }
  }
}

Frame plot_lines(const std::vector<double>& xs, const std::vector<std::vector<double>>& series, int height,
                 int width) {
  static const Rgb kColors[] = {{0.12f, 0.47f, 0.71f}, {1.0f, 0.5f, 0.05f}, {0.17f, 0.63f, 0.17f}, {0.84f, 0.15f, 0.16f}};
  Frame img(height, width, 1.0f);
  const int margin = 16;
  const Rgb axis{0.0f, 0.0f, 0.0f};
  draw_line(img, height - margin, margin, height - margin, width - margin, axis);
  draw_line(img, margin, margin, height - margin, margin, axis);
  if (xs.empty()) return img;
  double xlo = *std::min_element(xs.begin(), xs.end()), xhi = *std::max_element(xs.begin(), xs.end());
  double ylo = std::numeric_limits<double>::infinity(), yhi = -ylo;
  for (const auto& s : series)
    for (double v : s)
      if (std::isfinite(v)) { ylo = std::min(ylo, v); yhi = std::max(yhi, v); }
  if (!std::isfinite(ylo)) return img;
  if (xhi == xlo) xhi = xlo + 1;
  if (yhi == ylo) { yhi += 0.5; ylo -= 0.5; }
  const auto px = [&](double x) { return margin + static_cast<int>(std::lround((x - xlo) / (xhi - xlo) * (width - 2 * margin))); };
  const auto py = [&](double y) { return height - margin - static_cast<int>(std::lround((y - ylo) / (yhi - ylo) * (height - 2 * margin))); };
  for (std::size_t s = 0; s < series.size(); ++s) {
    const Rgb& col = kColors[s % 4];
    for (std::size_t i = 0; i + 1 < xs.size() && i + 1 < series[s].size(); ++i)
      draw_line(img, py(series[s][i]), px(xs[i]), py(series[s][i + 1]), px(xs[i + 1]), col);
    if (xs.size() == 1 && !series[s].empty()) fill_disc(img, py(series[s][0]), px(xs[0]), 2, col);
  }
  return img;
}

}  // namespace asal
