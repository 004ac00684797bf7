#pragma once

// A stand-in embedding server for protocol tests. Text embeddings are colour
// words mapped to RGB directions; image embeddings are the frame's mean
// colour in the same space, so "a red square" is closest to red frames.

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "asal/core/image.hpp"

namespace fake_sidecar {

struct Options {
  int dim = 16;
  bool supports_text = true;
  bool reverse_batches = false;  // answer each batch in reverse order
  std::string name = "fake-rgb";
};

inline std::vector<std::uint8_t> base64_decode(const std::string& in) {
  static const std::string table = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::vector<std::uint8_t> out;
  std::uint32_t buf = 0;
  int bits = 0;
  for (char ch : in) {
    if (ch == '=') break;
    const auto pos = table.find(ch);
    if (pos == std::string::npos) continue;
    buf = (buf << 6) | static_cast<std::uint32_t>(pos);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<std::uint8_t>((buf >> bits) & 0xFF));
    }
  }
  return out;
}

inline std::vector<float> colour_vector(double r, double g, double b, int dim) {
  std::vector<float> v(dim, 0.0f);
  v[0] = static_cast<float>(r);
  v[1] = static_cast<float>(g);
  v[2] = static_cast<float>(b);
  v[dim - 1] = 0.05f;  // keeps black frames away from the zero vector
  double n = 0;
  for (float x : v) n += x * x;
  for (float& x : v) x = static_cast<float>(x / std::sqrt(n));
  return v;
}

/// Handles one request line; returns the response line.
inline std::string handle(const std::string& line, const Options& opt) {
  using nlohmann::json;
  json req;
  try {
    req = json::parse(line);
  } catch (...) {
    return json{{"error", "malformed request"}}.dump();
  }
  const std::string op = req.value("op", "");
  if (op == "describe") return json{{"name", opt.name}, {"dim", opt.dim}, {"supports_text", opt.supports_text}}.dump();
  json resp{{"id", req.value("id", std::uint64_t{0})}};
  if (op == "embed_text") {
    const std::string text = req.value("text", "");
    if (!opt.supports_text) {
      resp["error"] = "text not supported";
    } else if (text.empty()) {
      resp["error"] = "empty prompt";
    } else {
      const bool red = text.find("red") != std::string::npos;
      const bool green = text.find("green") != std::string::npos;
      const bool blue = text.find("blue") != std::string::npos;
      resp["embedding"] = colour_vector(red, green, blue, opt.dim);
    }
  } else if (op == "embed_image") {
    try {
      const asal::Frame f = asal::decode_png(base64_decode(req.value("png_b64", "")));
      double sum[3] = {0, 0, 0};
      for (std::size_t i = 0; i < f.pixels.size(); ++i) sum[i % 3] += f.pixels[i];
      const double n = static_cast<double>(f.height) * f.width;
      resp["embedding"] = colour_vector(sum[0] / n, sum[1] / n, sum[2] / n, opt.dim);
    } catch (const std::exception& e) {
      resp["error"] = std::string("bad image: ") + e.what();
    }
  } else {
    resp["error"] = "unknown op " + op;
  }
  return resp.dump();
}

}  // namespace fake_sidecar
