#pragma once

// Per-pixel preprocessing kernels: grayscale conversion, colour gradient,
// Gaussian enhancement, mean/variance normalization, local-mean
// binarization, binary median and disk dilation. Window operations
// replicate the border.

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "veinid/error.hpp"
#include "veinid/image.hpp"

namespace veinid {

// ITU-R 601 luma weights.
inline constexpr double kLumaR = 0.2989;
inline constexpr double kLumaG = 0.5870;
inline constexpr double kLumaB = 0.1140;

inline GrayImage to_grayscale(const ColorImage& img) {
  GrayImage out(img.width(), img.height());
  auto src = img.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = kLumaR * src[i].r + kLumaG * src[i].g + kLumaB * src[i].b;
  }
  return out;
}

inline std::array<GrayImage, 3> split_channels(const ColorImage& img) {
  std::array<GrayImage, 3> bands{GrayImage(img.width(), img.height()),
                                 GrayImage(img.width(), img.height()),
                                 GrayImage(img.width(), img.height())};
  auto src = img.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    bands[0].pixels()[i] = src[i].r;
    bands[1].pixels()[i] = src[i].g;
    bands[2].pixels()[i] = src[i].b;
  }
  return bands;
}

namespace detail {

// Sobel derivatives scaled by 1/8, so a unit-slope ramp has gradient 1.
inline void sobel(const GrayImage& img, int x, int y, double& gx, double& gy) {
  auto p = [&](int dx, int dy) { return img.clamped(x + dx, y + dy); };
  gx = ((p(1, -1) + 2.0 * p(1, 0) + p(1, 1)) -
        (p(-1, -1) + 2.0 * p(-1, 0) + p(-1, 1))) / 8.0;
  gy = ((p(-1, 1) + 2.0 * p(0, 1) + p(1, 1)) -
        (p(-1, -1) + 2.0 * p(0, -1) + p(1, -1))) / 8.0;
}

// Sum over a (2r+1)-wide window along rows then columns, replicated border.
template <typename T, typename Acc>
Raster<Acc> box_sum(const Raster<T>& img, int r) {
  const int w = img.width();
  const int h = img.height();
  Raster<Acc> rows(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      Acc s{};
      for (int d = -r; d <= r; ++d) s += static_cast<Acc>(img.clamped(x + d, y));
      rows.at(x, y) = s;
    }
  }
  Raster<Acc> out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      Acc s{};
      for (int d = -r; d <= r; ++d) s += rows.clamped(x, y + d);
      out.at(x, y) = s;
    }
  }
  return out;
}

inline void require_odd_window(int window, const char* what) {
  if (window < 3 || window % 2 == 0) {
    throw InvalidParameter(std::string(what) + ": window must be odd and >= 3");
  }
}

}  // namespace detail

// Per-pixel maximum of the band gradient magnitudes.
inline GradientField max_band_gradient(std::span<const GrayImage> bands) {
  if (bands.empty()) throw InvalidParameter("max_band_gradient: no bands");
  const auto& first = bands.front();
  require_min_size(first, 3, "color_gradient");
  GradientField field{Raster<double>(first.width(), first.height())};
  for (int y = 0; y < first.height(); ++y) {
    for (int x = 0; x < first.width(); ++x) {
      double best = 0.0;
      for (const auto& band : bands) {
        double gx = 0.0;
        double gy = 0.0;
        detail::sobel(band, x, y, gx, gy);
        best = std::max(best, std::hypot(gx, gy));
      }
      field.magnitude.at(x, y) = best;
    }
  }
  return field;
}

inline GradientField color_gradient(const ColorImage& img) {
  require_min_size(img, 3, "color_gradient");
  const auto bands = split_channels(img);
  return max_band_gradient(bands);
}

// Normalized 1-D Gaussian taps, radius ceil(3 sigma).
inline std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidParameter("gaussian_smooth: sigma must be > 0");
  }
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(2 * radius + 1);
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double v = std::exp(-(k * k) / (2.0 * sigma * sigma));
    taps[k + radius] = v;
    sum += v;
  }
  for (double& t : taps) t /= sum;
  return taps;
}

inline GrayImage gaussian_smooth(const GrayImage& img, double sigma) {
  const auto taps = gaussian_kernel(sigma);
  const int radius = static_cast<int>(taps.size() / 2);
  const int w = img.width();
  const int h = img.height();
  GrayImage tmp(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int k = -radius; k <= radius; ++k) s += taps[k + radius] * img.clamped(x + k, y);
      tmp.at(x, y) = s;
    }
  }
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int k = -radius; k <= radius; ++k) s += taps[k + radius] * tmp.clamped(x, y + k);
      out.at(x, y) = s;
    }
  }
  return out;
}

struct MeanVariance {
  double mean = 0.0;
  double variance = 0.0;
};

// Population statistics.
inline MeanVariance statistics(const GrayImage& img) {
  MeanVariance mv;
  if (img.empty()) return mv;
  for (double v : img.pixels()) mv.mean += v;
  mv.mean /= static_cast<double>(img.size());
  for (double v : img.pixels()) mv.variance += (v - mv.mean) * (v - mv.mean);
  mv.variance /= static_cast<double>(img.size());
  return mv;
}

// Maps the image to mean `target_mean` and variance `target_variance`.
inline GrayImage normalize(const GrayImage& img, double target_mean,
                           double target_variance) {
  if (target_variance < 0.0) {
    throw InvalidParameter("normalize: target variance must be >= 0");
  }
  const auto [mean, var] = statistics(img);
  GrayImage out(img.width(), img.height(), target_mean);
  if (target_variance == 0.0) return out;
  if (var <= 0.0) throw DegenerateImage("normalize: input image has zero variance");
  auto src = img.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double d = src[i] - mean;
    const double dev = std::sqrt(target_variance * d * d / var);
    dst[i] = d > 0.0 ? target_mean + dev : target_mean - dev;
  }
  return out;
}

// Foreground where a pixel is strictly darker than the mean of its
// window x window neighbourhood. Differences at rounding level count as ties
// (background).
inline BinaryImage binarize_mean(const GrayImage& img, int window) {
  detail::require_odd_window(window, "binarize_mean");
  const int r = window / 2;
  const auto sums = detail::box_sum<double, double>(img, r);
  const double area = static_cast<double>(window) * window;
  BinaryImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const double mean = sums.at(x, y) / area;
      const double tol = 1e-9 * std::max(1.0, std::abs(mean));
      out.at(x, y) = img.at(x, y) < mean - tol ? 1 : 0;
    }
  }
  return out;
}

// Grey-level median over a window x window neighbourhood.
inline GrayImage median_smooth(const GrayImage& img, int window) {
  detail::require_odd_window(window, "median_smooth");
  const int r = window / 2;
  GrayImage out(img.width(), img.height());
  std::vector<double> buf(static_cast<std::size_t>(window) * window);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      std::size_t k = 0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) buf[k++] = img.clamped(x + dx, y + dy);
      }
      auto mid = buf.begin() + static_cast<std::ptrdiff_t>(buf.size() / 2);
      std::nth_element(buf.begin(), mid, buf.end());
      out.at(x, y) = *mid;
    }
  }
  return out;
}

// Majority vote over the window (window^2 is odd, so there are no ties).
inline BinaryImage median_denoise(const BinaryImage& img, int window) {
  detail::require_odd_window(window, "median_denoise");
  const auto counts = detail::box_sum<std::uint8_t, int>(img, window / 2);
  const int half = window * window / 2;
  BinaryImage out(img.width(), img.height());
  auto src = counts.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] > half ? 1 : 0;
  return out;
}

// Offsets of the discrete disk dx^2 + dy^2 <= radius^2.
inline std::vector<std::array<int, 2>> disk_offsets(int radius) {
  std::vector<std::array<int, 2>> offs;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      if (dx * dx + dy * dy <= radius * radius) offs.push_back({dx, dy});
    }
  }
  return offs;
}

inline BinaryImage dilate_disk(const BinaryImage& img, int radius) {
  if (radius < 1) throw InvalidParameter("dilate_disk: radius must be >= 1");
  const auto offs = disk_offsets(radius);
  BinaryImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (!img.at(x, y)) continue;
      for (const auto& [dx, dy] : offs) {
        if (out.contains(x + dx, y + dy)) out.at(x + dx, y + dy) = 1;
      }
    }
  }
  return out;
}

}  // namespace veinid
