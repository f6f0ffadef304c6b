#pragma once

// Ridge-forking detection on a thinned vein image and rigid normalization
// of the resulting point set.

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "veinid/error.hpp"
#include "veinid/image.hpp"
#include "veinid/thinning.hpp"

namespace veinid {

// Position in pixels; theta in degrees, kept in [0, 360).
struct Minutia {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  friend bool operator==(const Minutia&, const Minutia&) = default;
};

struct Template {
  std::vector<Minutia> minutiae;
  double ref_x = 0.0;
  double ref_y = 0.0;
  std::string source_id;

  std::size_t size() const { return minutiae.size(); }
  bool empty() const { return minutiae.empty(); }
};

inline double wrap_degrees(double deg) {
  double d = std::fmod(deg, 360.0);
  if (d < 0.0) d += 360.0;
  if (d >= 360.0) d -= 360.0;  // fmod(-tiny) + 360 can round up to 360
  return d;
}

inline double degrees(double rad) { return rad * 180.0 / std::numbers::pi; }
inline double radians(double deg) { return deg * std::numbers::pi / 180.0; }

// Number of arms leaving a pixel: half the cyclic sum of |P(i) - P(i+1)|.
inline int crossing_number(const Neighborhood& nb) {
  int sum = 0;
  for (int i = 0; i < 8; ++i) sum += std::abs(int(nb.p[i]) - int(nb.p[(i + 1) % 8]));
  return sum / 2;
}

inline constexpr int kForkingArms = 3;
inline constexpr double kMergeRadius = 3.0;

struct ForkingPixel {
  int x = 0;
  int y = 0;
  int arms = 0;
};

inline std::vector<ForkingPixel> find_forkings(const BinaryImage& skel) {
  std::vector<ForkingPixel> out;
  for (int y = 0; y < skel.height(); ++y) {
    for (int x = 0; x < skel.width(); ++x) {
      if (!skel.at(x, y)) continue;
      const int a = crossing_number(neighborhood_at(skel, x, y));
      if (a >= kForkingArms) out.push_back({x, y, a});
    }
  }
  return out;
}

namespace detail {

struct Cluster {
  double sx = 0.0;
  double sy = 0.0;
  int count = 0;

  double cx() const { return sx / count; }
  double cy() const { return sy / count; }
};

// Repeatedly fuses the closest pair of clusters while that pair is within
// `radius`; ties go to the lowest index pair.
inline std::vector<Cluster> merge_close(std::vector<Cluster> clusters, double radius) {
  while (clusters.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0;
    std::size_t bj = 0;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        const double d = std::hypot(clusters[i].cx() - clusters[j].cx(),
                                    clusters[i].cy() - clusters[j].cy());
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    if (best > radius) break;
    clusters[bi].sx += clusters[bj].sx;
    clusters[bi].sy += clusters[bj].sy;
    clusters[bi].count += clusters[bj].count;
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  return clusters;
}

}  // namespace detail

// Every skeleton pixel with three or more arms is a forking. Forkings
// closer than the merge radius collapse to their centroid. theta is the
// direction from the centroid of all forking pixels to the minutia.
inline Template extract_minutiae(const BinaryImage& skel, double merge_radius = kMergeRadius) {
  const auto forks = find_forkings(skel);
  if (forks.empty()) throw NoFeatures("extract_minutiae: no ridge forkings found");

  Template t;
  std::vector<detail::Cluster> clusters;
  clusters.reserve(forks.size());
  for (const auto& f : forks) {
    t.ref_x += f.x;
    t.ref_y += f.y;
    clusters.push_back({double(f.x), double(f.y), 1});
  }
  t.ref_x /= static_cast<double>(forks.size());
  t.ref_y /= static_cast<double>(forks.size());

  for (const auto& c : detail::merge_close(std::move(clusters), merge_radius)) {
    const double x = c.cx();
    const double y = c.cy();
    t.minutiae.push_back({x, y, wrap_degrees(degrees(std::atan2(y - t.ref_y, x - t.ref_x)))});
  }
  return t;
}

// Moves the minutiae centroid to the origin and turns the principal axis
// of the point cloud onto +x. The 180 degree ambiguity is settled by
// making the third central moment along +x non-negative. Angles rotate
// with the points.
inline Template normalize_template(const Template& t) {
  if (t.size() < 2) throw DegenerateTemplate("normalize_template: need at least 2 minutiae");
  const double n = static_cast<double>(t.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& m : t.minutiae) {
    mx += m.x;
    my += m.y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (const auto& m : t.minutiae) {
    const double dx = m.x - mx;
    const double dy = m.y - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx + syy <= 1e-18) throw DegenerateTemplate("normalize_template: minutiae are coincident");

  double axis = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  auto rotated = [&](double angle) {
    const double c = std::cos(-angle);
    const double s = std::sin(-angle);
    Template out;
    out.source_id = t.source_id;
    out.minutiae.reserve(t.size());
    for (const auto& m : t.minutiae) {
      const double dx = m.x - mx;
      const double dy = m.y - my;
      out.minutiae.push_back(
          {c * dx - s * dy, s * dx + c * dy, wrap_degrees(m.theta - degrees(angle))});
    }
    return out;
  };
  Template out = rotated(axis);
  double m3 = 0.0;
  for (const auto& m : out.minutiae) m3 += m.x * m.x * m.x;
  if (m3 < 0.0) out = rotated(axis + std::numbers::pi);
  return out;
}

}  // namespace veinid
