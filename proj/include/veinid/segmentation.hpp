#pragma once

// Region-of-interest extraction with an active contour grown outwards from
// the image centre, plus removal of the hand outline from a thinned image.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "veinid/components.hpp"
#include "veinid/error.hpp"
#include "veinid/filters.hpp"
#include "veinid/image.hpp"

namespace veinid {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

// Closed curve; the last point connects back to the first and is not
// repeated.
struct Contour {
  std::vector<Point2> points;

  std::size_t size() const { return points.size(); }
};

inline constexpr std::size_t kMinContourPoints = 16;

inline Contour circle_contour(Point2 center, double radius, std::size_t n) {
  Contour c;
  c.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    c.points.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
  }
  return c;
}

inline double signed_area(const Contour& c) {
  double a = 0.0;
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = c.points[i];
    const auto& q = c.points[(i + 1) % n];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * a;
}

inline double perimeter(const Contour& c) {
  double len = 0.0;
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = c.points[i];
    const auto& q = c.points[(i + 1) % n];
    len += std::hypot(q.x - p.x, q.y - p.y);
  }
  return len;
}

namespace detail {

inline double cross(Point2 o, Point2 a, Point2 b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline bool segments_cross(Point2 a, Point2 b, Point2 c, Point2 d) {
  const double d1 = cross(c, d, a);
  const double d2 = cross(c, d, b);
  const double d3 = cross(a, b, c);
  const double d4 = cross(a, b, d);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 &&
         d3 != 0 && d4 != 0;
}

}  // namespace detail

inline bool is_simple(const Contour& c) {
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (detail::segments_cross(c.points[i], c.points[(i + 1) % n], c.points[j],
                                 c.points[(j + 1) % n])) {
        return false;
      }
    }
  }
  return true;
}

struct SnakeParams {
  double eta1 = 0.05;       // elasticity weight
  double eta2 = 0.005;      // bending weight
  double step = 1.0;        // time step
  int max_iters = 3000;
  double converge_eps = 0.05;  // px, largest point displacement per iteration
  double balloon = 0.3;        // outward pressure

  void validate() const {
    if (!(eta1 >= 0.0) || !(eta2 >= 0.0)) throw InvalidParameter("snake: eta1, eta2 must be >= 0");
    if (!(step > 0.0)) throw InvalidParameter("snake: step must be > 0");
    if (max_iters < 1) throw InvalidParameter("snake: max_iters must be >= 1");
    if (!(converge_eps > 0.0)) throw InvalidParameter("snake: converge_eps must be > 0");
    if (!std::isfinite(balloon)) throw InvalidParameter("snake: balloon must be finite");
  }
};

// External energy -|grad I|^2 and its spatial derivatives.
struct EnergyField {
  Raster<double> values;
  Raster<double> grad_x;
  Raster<double> grad_y;

  int width() const { return values.width(); }
  int height() const { return values.height(); }
};

inline EnergyField external_energy(const GradientField& gradient) {
  const int w = gradient.width();
  const int h = gradient.height();
  EnergyField f{Raster<double>(w, h), Raster<double>(w, h), Raster<double>(w, h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double g = gradient.magnitude.at(x, y);
      f.values.at(x, y) = -g * g;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      f.grad_x.at(x, y) = 0.5 * (f.values.clamped(x + 1, y) - f.values.clamped(x - 1, y));
      f.grad_y.at(x, y) = 0.5 * (f.values.clamped(x, y + 1) - f.values.clamped(x, y - 1));
    }
  }
  return f;
}

inline EnergyField external_energy(const ColorImage& img) {
  return external_energy(color_gradient(img));
}

struct SnakeResult {
  Contour contour;
  int iterations = 0;
  // False when max_iters ran out first; the contour is still the last state.
  bool converged = false;
};

namespace detail {

inline double bilinear(const Raster<double>& r, double x, double y) {
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const double fx = x - x0;
  const double fy = y - y0;
  const double a = r.clamped(x0, y0);
  const double b = r.clamped(x0 + 1, y0);
  const double c = r.clamped(x0, y0 + 1);
  const double d = r.clamped(x0 + 1, y0 + 1);
  return (a * (1 - fx) + b * fx) * (1 - fy) + (c * (1 - fx) + d * fx) * fy;
}

}  // namespace detail

// Explicit relaxation of eta1 v'' - eta2 v'''' - grad E_ext plus a balloon
// term along the outward normal. The external force is scaled so that its
// strongest value in the field has unit length, which puts it on the same
// footing as the balloon coefficient. Points are clamped to the field.
inline SnakeResult evolve_snake(const EnergyField& field, const Contour& init,
                                const SnakeParams& params) {
  params.validate();
  if (init.size() < kMinContourPoints) {
    throw InvalidParameter("evolve_snake: contour needs at least 16 points");
  }
  const int w = field.width();
  const int h = field.height();
  if (w < 1 || h < 1) throw InvalidParameter("evolve_snake: empty field");

  double max_force = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      max_force = std::max(max_force, std::hypot(field.grad_x.at(x, y), field.grad_y.at(x, y)));
    }
  }
  const double ext_scale = max_force > 0.0 ? 1.0 / max_force : 0.0;

  SnakeResult result{init, 0, false};
  auto& pts = result.contour.points;
  for (auto& p : pts) {
    p.x = std::clamp(p.x, 0.0, w - 1.0);
    p.y = std::clamp(p.y, 0.0, h - 1.0);
  }
  const std::size_t n = pts.size();
  std::vector<Point2> next(n);
  for (int it = 0; it < params.max_iters; ++it) {
    const double orientation = signed_area(result.contour) >= 0.0 ? 1.0 : -1.0;
    double moved = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& pm2 = pts[(i + n - 2) % n];
      const auto& pm1 = pts[(i + n - 1) % n];
      const auto& p = pts[i];
      const auto& pp1 = pts[(i + 1) % n];
      const auto& pp2 = pts[(i + 2) % n];

      const double d2x = pm1.x - 2.0 * p.x + pp1.x;
      const double d2y = pm1.y - 2.0 * p.y + pp1.y;
      const double d4x = pm2.x - 4.0 * pm1.x + 6.0 * p.x - 4.0 * pp1.x + pp2.x;
      const double d4y = pm2.y - 4.0 * pm1.y + 6.0 * p.y - 4.0 * pp1.y + pp2.y;

      double nx = orientation * (pp1.y - pm1.y);
      double ny = -orientation * (pp1.x - pm1.x);
      const double nlen = std::hypot(nx, ny);
      if (nlen > 0.0) {
        nx /= nlen;
        ny /= nlen;
      }

      const double fx = -ext_scale * detail::bilinear(field.grad_x, p.x, p.y);
      const double fy = -ext_scale * detail::bilinear(field.grad_y, p.x, p.y);

      const double vx = params.eta1 * d2x - params.eta2 * d4x + fx + params.balloon * nx;
      const double vy = params.eta1 * d2y - params.eta2 * d4y + fy + params.balloon * ny;
      next[i].x = std::clamp(p.x + params.step * vx, 0.0, w - 1.0);
      next[i].y = std::clamp(p.y + params.step * vy, 0.0, h - 1.0);
      moved = std::max(moved, std::hypot(next[i].x - p.x, next[i].y - p.y));
    }
    pts.swap(next);
    result.iterations = it + 1;
    if (moved < params.converge_eps) {
      result.converged = true;
      break;
    }
  }
  return result;
}

struct SegmentOptions {
  std::size_t contour_points = 100;
  int crop_margin = 5;
  // Initial circle radius as a fraction of min(width, height).
  double init_radius_fraction = 1.0 / 20.0;
  // Pre-filtering of each colour band before the gradient is taken:
  // median removes impulse noise, the Gaussian suppresses thin interior
  // structure relative to the silhouette edge.
  int median_window = 3;
  double presmooth_sigma = 2.0;
  int min_roi_side = 32;
};

struct SegmentResult {
  GrayImage roi;
  Box crop;
  Contour contour;
  int iterations = 0;
  bool converged = false;
};

inline EnergyField segmentation_energy(const ColorImage& img, const SegmentOptions& opt) {
  auto bands = split_channels(img);
  for (auto& band : bands) {
    if (opt.median_window > 1) band = median_smooth(band, opt.median_window);
    if (opt.presmooth_sigma > 0.0) band = gaussian_smooth(band, opt.presmooth_sigma);
  }
  return external_energy(max_band_gradient(bands));
}

// Bounding box of the contour grown by `margin` on every side, clipped.
inline Box contour_crop_box(const Contour& c, int margin, int width, int height) {
  double minx = c.points.front().x, maxx = minx;
  double miny = c.points.front().y, maxy = miny;
  for (const auto& p : c.points) {
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  }
  const int x0 = std::max(0, static_cast<int>(std::lround(minx)) - margin);
  const int y0 = std::max(0, static_cast<int>(std::lround(miny)) - margin);
  const int x1 = std::min(width - 1, static_cast<int>(std::lround(maxx)) + margin);
  const int y1 = std::min(height - 1, static_cast<int>(std::lround(maxy)) + margin);
  return {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

// Grows a small circle from the image centre until it settles on the
// silhouette, then crops the box around it and converts it to grey.
inline SegmentResult auto_segment(const ColorImage& img, const SnakeParams& params,
                                  const SegmentOptions& opt = {}) {
  require_min_size(img, 3, "auto_segment");
  params.validate();
  if (opt.contour_points < kMinContourPoints) {
    throw InvalidParameter("auto_segment: contour needs at least 16 points");
  }
  const auto field = segmentation_energy(img, opt);
  const Point2 center{(img.width() - 1) / 2.0, (img.height() - 1) / 2.0};
  const double radius = std::min(img.width(), img.height()) * opt.init_radius_fraction;
  const auto snake = evolve_snake(field, circle_contour(center, radius, opt.contour_points), params);

  SegmentResult out;
  out.contour = snake.contour;
  out.iterations = snake.iterations;
  out.converged = snake.converged;
  out.crop = contour_crop_box(snake.contour, opt.crop_margin, img.width(), img.height());
  if (out.crop.width < opt.min_roi_side || out.crop.height < opt.min_roi_side) {
    throw EmptyROI("auto_segment: region of interest smaller than " +
                   std::to_string(opt.min_roi_side) + "x" + std::to_string(opt.min_roi_side));
  }
  out.roi = to_grayscale(crop(img, out.crop));
  return out;
}

inline constexpr int kDefaultPruneSize = 30;

// Clears the first and last foreground pixel of every row and every column
// (positions taken from the input, not updated while scanning), then drops
// fragments smaller than `min_size`.
inline BinaryImage remove_boundary_strokes(const BinaryImage& skel,
                                           int min_size = kDefaultPruneSize) {
  BinaryImage out = skel;
  const int w = skel.width();
  const int h = skel.height();
  for (int y = 0; y < h; ++y) {
    int first = -1;
    int last = -1;
    for (int x = 0; x < w; ++x) {
      if (skel.at(x, y)) {
        if (first < 0) first = x;
        last = x;
      }
    }
    if (first >= 0) {
      out.at(first, y) = 0;
      out.at(last, y) = 0;
    }
  }
  for (int x = 0; x < w; ++x) {
    int first = -1;
    int last = -1;
    for (int y = 0; y < h; ++y) {
      if (skel.at(x, y)) {
        if (first < 0) first = y;
        last = y;
      }
    }
    if (first >= 0) {
      out.at(x, first) = 0;
      out.at(x, last) = 0;
    }
  }
  return prune_components(out, min_size);
}

}  // namespace veinid
