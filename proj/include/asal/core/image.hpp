#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "asal/core/types.hpp"

namespace asal {

using Rgb = std::array<float, 3>;

/// Nearest-neighbour resample: output pixel (y, x) takes source (y*H/h, x*W/w).
Frame resample_nearest(const Frame& src, int out_h, int out_w);

/// Area-weighted box average down to out_h x out_w.
Frame resample_box(const Frame& src, int out_h, int out_w);

std::vector<std::uint8_t> encode_png(const Frame& frame);
Frame decode_png(const std::vector<std::uint8_t>& bytes);
void write_png(const std::filesystem::path& path, const Frame& frame);
Frame read_png(const std::filesystem::path& path);

std::string base64_encode(const std::vector<std::uint8_t>& bytes);

/// Raster helpers; all coordinates in pixels, clipped to the frame.
void fill_disc(Frame& frame, double cy, double cx, double radius, const Rgb& color);
void fill_triangle(Frame& frame, const std::array<double, 2>& a, const std::array<double, 2>& b,
                   const std::array<double, 2>& c, const Rgb& color);
void draw_line(Frame& frame, int y0, int x0, int y1, int x1, const Rgb& color);

/// White-background line plot of one or more series sharing the x axis.
Frame plot_lines(const std::vector<double>& xs, const std::vector<std::vector<double>>& series, int height = 240,
                 int width = 320);

}  // namespace asal
