#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "veinid/error.hpp"

namespace veinid {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Row-major raster. Pixel (x, y) is column x, row y; its centre sits at
// integer coordinates.
template <typename T>
class Raster {
 public:
  using value_type = T;

  Raster() = default;
  Raster(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    if (width < 0 || height < 0) {
      throw InvalidParameter("raster dimensions must be non-negative");
    }
    pixels_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return pixels_.size(); }
  bool empty() const { return pixels_.empty(); }

  bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  T& at(int x, int y) { return pixels_[index(x, y)]; }
  const T& at(int x, int y) const { return pixels_[index(x, y)]; }

  // Replicated-border read.
  const T& clamped(int x, int y) const {
    return at(std::clamp(x, 0, width_ - 1), std::clamp(y, 0, height_ - 1));
  }

  // Zero outside the raster.
  T or_zero(int x, int y) const { return contains(x, y) ? at(x, y) : T{}; }

  std::span<T> pixels() { return pixels_; }
  std::span<const T> pixels() const { return pixels_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> pixels_;
};

using ColorImage = Raster<Rgb>;
// Intensities in [0, 255], real valued.
using GrayImage = Raster<double>;
// 1 = foreground (vein / ridge), 0 = background.
using BinaryImage = Raster<std::uint8_t>;

// max(|grad R|, |grad G|, |grad B|) per pixel.
struct GradientField {
  Raster<double> magnitude;

  int width() const { return magnitude.width(); }
  int height() const { return magnitude.height(); }
};

// Axis-aligned pixel rectangle, [x0, x0 + width) x [y0, y0 + height).
struct Box {
  int x0 = 0;
  int y0 = 0;
  int width = 0;
  int height = 0;

  friend bool operator==(const Box&, const Box&) = default;
};

template <typename T>
void require_min_size(const Raster<T>& img, int min_side, const char* what) {
  if (img.width() < min_side || img.height() < min_side) {
    throw ImageTooSmall(std::string(what) + ": image must be at least " +
                        std::to_string(min_side) + "x" +
                        std::to_string(min_side));
  }
}

template <typename T>
Raster<T> crop(const Raster<T>& img, const Box& box) {
  if (box.x0 < 0 || box.y0 < 0 || box.width < 0 || box.height < 0 ||
      box.x0 + box.width > img.width() || box.y0 + box.height > img.height()) {
    throw InvalidParameter("crop box outside image");
  }
  Raster<T> out(box.width, box.height);
  for (int y = 0; y < box.height; ++y) {
    for (int x = 0; x < box.width; ++x) {
      out.at(x, y) = img.at(box.x0 + x, box.y0 + y);
    }
  }
  return out;
}

inline std::size_t count_foreground(const BinaryImage& img) {
  return static_cast<std::size_t>(
      std::count_if(img.pixels().begin(), img.pixels().end(),
                    [](std::uint8_t v) { return v != 0; }));
}

}  // namespace veinid
