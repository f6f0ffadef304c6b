#pragma once

// Seeded synthetic hand-vein rasters with exact branch-point ground truth,
// and the rigid/noise perturbations used to make re-samples of an identity.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "veinid/error.hpp"
#include "veinid/image.hpp"
#include "veinid/segmentation.hpp"
#include "veinid/template_io.hpp"

namespace veinid {

// mt19937_64 seeded through std::seed_seq; both are fully specified by the
// standard, so streams are identical on every platform. Distributions are
// done by hand for the same reason.
class Rng {
 public:
  explicit Rng(std::initializer_list<std::uint64_t> keys) {
    std::vector<std::uint32_t> words;
    for (auto k : keys) {
      words.push_back(static_cast<std::uint32_t>(k));
      words.push_back(static_cast<std::uint32_t>(k >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    gen_.seed(seq);
  }

  std::uint64_t next() { return gen_(); }

  // [0, 1)
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Integer in [lo, hi].
  int uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(gen_() % span);
  }

  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 gen_;
};

struct SynthParams {
  std::uint64_t seed = 1;
  int width = 480;
  int height = 640;
  int branch_count = 8;       // 4..12
  double wander = 5.0;        // degrees of heading jitter per walk step
  int vein_thickness = 3;     // 2..5 px

  void validate() const {
    if (width < 64 || height < 64) throw InvalidParameter("synth: image must be at least 64x64");
    if (branch_count < 4 || branch_count > 12) throw InvalidParameter("synth: branch_count must be in [4, 12]");
    if (!(wander >= 0.0 && wander <= 30.0)) throw InvalidParameter("synth: wander must be in [0, 30]");
    if (vein_thickness < 2 || vein_thickness > 5) throw InvalidParameter("synth: vein_thickness must be in [2, 5]");
  }
};

struct Polyline {
  std::vector<Point2> points;
};

struct GroundTruth {
  std::vector<Point2> branch_points;
  std::vector<Polyline> tree_edges;
};

struct SynthSample {
  ColorImage image;
  GroundTruth truth;
};

// Elliptic hand silhouette.
struct Silhouette {
  double cx = 0.0;
  double cy = 0.0;
  double ax = 0.0;  // semi-axis along x
  double ay = 0.0;  // semi-axis along y

  // < 1 inside, 1 on the boundary.
  double level(Point2 p) const {
    const double u = (p.x - cx) / ax;
    const double v = (p.y - cy) / ay;
    return u * u + v * v;
  }
};

inline constexpr Rgb kSurroundColor{8, 8, 8};

namespace detail {

inline double segment_distance(Point2 p, Point2 a, Point2 b) {
  const double vx = b.x - a.x;
  const double vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0.0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

inline double polyline_distance(Point2 p, const Polyline& line) {
  double best = std::numeric_limits<double>::infinity();
  const auto& pts = line.points;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    best = std::min(best, segment_distance(p, pts[i], pts[i + 1]));
  }
  return best;
}

struct TreeEdge {
  Polyline line;
  int from = 0;  // node indices
  int to = 0;
};

struct TreeGrowth {
  std::vector<Point2> nodes;
  std::vector<double> heading;  // degrees, arrival heading at the node
  std::vector<bool> fork;
  std::vector<TreeEdge> edges;
};

// Tree shape limits, in pixels.
struct TreeLimits {
  double inside_level = 0.80;  // fraction of the silhouette semi-axes
  double fork_separation = 30.0;
  double node_exclusion = 2.0;  // in clearances; near a shared node edges may touch
  double clearance = 20.0;
  double step = 3.0;
};

inline Polyline random_walk(Point2 start, double target, double length, double wander,
                            double step, Rng& rng, double& end_heading) {
  Polyline line;
  line.points.push_back(start);
  Point2 pos = start;
  double h = target;
  const int steps = std::max(2, static_cast<int>(std::lround(length / step)));
  // The first steps run straight so sibling strokes separate at the fork.
  constexpr int kStraightSteps = 4;
  for (int s = 0; s < steps; ++s) {
    if (s >= kStraightSteps) h += wander * rng.normal() + 0.25 * (target - h);
    pos = {pos.x + step * std::cos(radians(h)), pos.y + step * std::sin(radians(h))};
    line.points.push_back(pos);
  }
  end_heading = h;
  return line;
}

// A new edge from node `from` must stay inside the silhouette and keep its
// distance from every other edge except near `from` itself.
inline bool edge_fits(const Polyline& line, int from, const TreeGrowth& tree,
                      const std::vector<const Polyline*>& extra, const Silhouette& hand,
                      const TreeLimits& lim) {
  const Point2 origin = tree.nodes[from];
  for (const auto& q : line.points) {
    if (hand.level(q) > lim.inside_level * lim.inside_level) return false;
  }
  auto clear_of = [&](const Polyline& other, bool shares_node) {
    for (const auto& q : line.points) {
      if (shares_node &&
          std::hypot(q.x - origin.x, q.y - origin.y) < lim.node_exclusion * lim.clearance) {
        continue;
      }
      if (polyline_distance(q, other) < lim.clearance) return false;
    }
    return true;
  };
  for (const auto& e : tree.edges) {
    if (!clear_of(e.line, e.from == from || e.to == from)) return false;
  }
  for (const auto* other : extra) {
    if (!clear_of(*other, true)) return false;
  }
  return true;
}

// Grows a tree with exactly `forks` branch points: a trunk from the wrist
// end, then repeatedly a random open tip splits into a continuation and a
// side branch. Returns false if the tree got stuck.
inline bool grow_tree(TreeGrowth& tree, int forks, const Silhouette& hand, const SynthParams& p,
                      double edge_length, const TreeLimits& lim, Rng& rng) {
  tree = {};
  tree.nodes.push_back({hand.cx + rng.uniform(-0.15, 0.15) * hand.ax, hand.cy + 0.70 * hand.ay});
  tree.heading.push_back(-90.0 + rng.uniform(-8.0, 8.0));
  tree.fork.push_back(false);

  auto add_node = [&](Point2 pos, double heading) {
    tree.nodes.push_back(pos);
    tree.heading.push_back(heading);
    tree.fork.push_back(false);
    return static_cast<int>(tree.nodes.size()) - 1;
  };

  double h = 0.0;
  auto trunk = random_walk(tree.nodes[0], tree.heading[0], edge_length * rng.uniform(1.0, 1.4),
                           p.wander, lim.step, rng, h);
  if (!edge_fits(trunk, 0, tree, {}, hand, lim)) return false;
  const Point2 trunk_end = trunk.points.back();
  tree.edges.push_back({std::move(trunk), 0, add_node(trunk_end, h)});

  std::vector<int> open{1};
  int made = 0;
  while (made < forks) {
    if (open.empty()) return false;
    const auto pick = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(open.size()) - 1));
    const int node = open[pick];
    open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));

    bool separated = true;
    for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
      if (tree.fork[k] && std::hypot(tree.nodes[k].x - tree.nodes[node].x,
                                     tree.nodes[k].y - tree.nodes[node].y) < lim.fork_separation) {
        separated = false;
      }
    }
    if (!separated) continue;

    bool placed = false;
    for (int attempt = 0; attempt < 40 && !placed; ++attempt) {
      const double base = tree.heading[node];
      const double t_main = std::clamp(base + rng.uniform(-12.0, 12.0), -165.0, -15.0);
      // The side branch leaves at a wide angle; flip sides rather than clamp
      // it towards the continuation.
      const double offset = rng.uniform(75.0, 100.0);
      double t_side = base + (rng.uniform() < 0.5 ? -offset : offset);
      if (t_side < -178.0 || t_side > -2.0) t_side = 2.0 * base - t_side;
      if (t_side < -178.0 || t_side > -2.0) continue;
      double h_main = 0.0;
      double h_side = 0.0;
      auto main = random_walk(tree.nodes[node], t_main, edge_length * rng.uniform(0.8, 1.3),
                              p.wander, lim.step, rng, h_main);
      auto side = random_walk(tree.nodes[node], t_side, edge_length * rng.uniform(0.7, 1.3),
                              p.wander, lim.step, rng, h_side);
      if (!edge_fits(main, node, tree, {}, hand, lim)) continue;
      if (!edge_fits(side, node, tree, {&main}, hand, lim)) continue;
      const Point2 main_end = main.points.back();
      const Point2 side_end = side.points.back();
      const int a = add_node(main_end, h_main);
      const int b = add_node(side_end, h_side);
      tree.edges.push_back({std::move(main), node, a});
      tree.edges.push_back({std::move(side), node, b});
      tree.fork[node] = true;
      open.push_back(a);
      open.push_back(b);
      placed = true;
    }
    if (placed) ++made;
  }
  return true;
}

inline void stamp_polyline(ColorImage& img, const Polyline& line, double radius, Rgb color) {
  const auto& pts = line.points;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const auto a = pts[i];
    const auto b = pts[i + 1];
    const int x0 = static_cast<int>(std::floor(std::min(a.x, b.x) - radius));
    const int x1 = static_cast<int>(std::ceil(std::max(a.x, b.x) + radius));
    const int y0 = static_cast<int>(std::floor(std::min(a.y, b.y) - radius));
    const int y1 = static_cast<int>(std::ceil(std::max(a.y, b.y) + radius));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        if (img.contains(x, y) && segment_distance({double(x), double(y)}, a, b) <= radius) {
          img.at(x, y) = color;
        }
      }
    }
  }
}

inline std::uint8_t channel(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

}  // namespace detail

// Vein colour for a given skin colour: every channel at least 60 levels
// darker.
inline Rgb vein_color(Rgb skin) {
  return {detail::channel(skin.r - 85.0), detail::channel(skin.g - 85.0),
          detail::channel(skin.b - 85.0)};
}

struct IdentityLayout {
  Silhouette hand;
  Rgb skin;
  GroundTruth truth;
};

inline IdentityLayout layout_identity(const SynthParams& p) {
  p.validate();
  Rng rng({p.seed, 0x5eed});
  IdentityLayout id;
  id.hand.cx = p.width / 2.0 + rng.uniform(-0.02, 0.02) * p.width;
  id.hand.cy = p.height / 2.0 + rng.uniform(-0.02, 0.02) * p.height;
  id.hand.ax = rng.uniform(0.32, 0.37) * p.width;
  id.hand.ay = rng.uniform(0.37, 0.41) * p.height;
  id.skin = {detail::channel(rng.uniform(205.0, 230.0)), detail::channel(rng.uniform(185.0, 205.0)),
             detail::channel(rng.uniform(170.0, 195.0))};

  const double edge_length = 0.22 * id.hand.ay;
  detail::TreeLimits limits;
  limits.clearance = 14.0 + 2.0 * p.vein_thickness;
  detail::TreeGrowth tree;
  for (int attempt = 0;; ++attempt) {
    if (attempt >= 500) throw InvalidParameter("synth: could not lay out a vein tree");
    const double scale = std::pow(0.95, attempt / 25);
    if (!detail::grow_tree(tree, p.branch_count, id.hand, p, edge_length * scale, limits, rng)) continue;
    for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
      if (tree.fork[k]) id.truth.branch_points.push_back(tree.nodes[k]);
    }
    for (auto& e : tree.edges) id.truth.tree_edges.push_back(std::move(e.line));
    return id;
  }
}

inline ColorImage render_identity(const SynthParams& p, const IdentityLayout& id) {
  ColorImage img(p.width, p.height, kSurroundColor);
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) {
      if (id.hand.level({double(x), double(y)}) <= 1.0) img.at(x, y) = id.skin;
    }
  }
  const Rgb vein = vein_color(id.skin);
  for (const auto& e : id.truth.tree_edges) {
    detail::stamp_polyline(img, e, p.vein_thickness / 2.0, vein);
  }
  return img;
}

// Grows a random vein tree from the wrist end of an elliptic silhouette
// and renders it dark on bright skin over a black surround.
inline SynthSample generate_identity(const SynthParams& p) {
  const auto id = layout_identity(p);
  return {render_identity(p, id), id.truth};
}

struct Perturbation {
  double rotation_deg = 0.0;  // |rotation| <= 30
  double tx = 0.0;
  double ty = 0.0;
  double noise_p = 0.0;  // [0, 0.05]
  std::uint64_t seed = 0;

  void validate() const {
    if (!(std::abs(rotation_deg) <= 30.0)) throw InvalidParameter("perturb: |rotation| must be <= 30");
    if (!(noise_p >= 0.0 && noise_p <= 0.05)) throw InvalidParameter("perturb: noise_p must be in [0, 0.05]");
    if (!std::isfinite(tx) || !std::isfinite(ty)) throw InvalidParameter("perturb: bad translation");
  }
};

// Forward map of the perturbation: rotate about the image centre by the
// standard rotation matrix in pixel coordinates, then translate.
inline Point2 perturb_point(Point2 p, const Perturbation& t, int width, int height) {
  const double cx = (width - 1) / 2.0;
  const double cy = (height - 1) / 2.0;
  const double c = std::cos(radians(t.rotation_deg));
  const double s = std::sin(radians(t.rotation_deg));
  const double dx = p.x - cx;
  const double dy = p.y - cy;
  return {c * dx - s * dy + cx + t.tx, s * dx + c * dy + cy + t.ty};
}

inline GroundTruth perturb_truth(const GroundTruth& gt, const Perturbation& t, int width, int height) {
  GroundTruth out = gt;
  for (auto& b : out.branch_points) b = perturb_point(b, t, width, height);
  for (auto& e : out.tree_edges) {
    for (auto& q : e.points) q = perturb_point(q, t, width, height);
  }
  return out;
}

// Bilinear resampling under the rigid motion (edges replicate), then
// salt-and-pepper: each pixel independently becomes white or black with
// probability noise_p.
inline ColorImage perturb(const ColorImage& img, const Perturbation& t) {
  t.validate();
  const int w = img.width();
  const int h = img.height();
  const double cx = (w - 1) / 2.0;
  const double cy = (h - 1) / 2.0;
  const double c = std::cos(radians(t.rotation_deg));
  const double s = std::sin(radians(t.rotation_deg));
  const bool identity = t.rotation_deg == 0.0 && t.tx == 0.0 && t.ty == 0.0;

  ColorImage out = img;
  if (!identity) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double dx = x - cx - t.tx;
        const double dy = y - cy - t.ty;
        const double sx = c * dx + s * dy + cx;
        const double sy = -s * dx + c * dy + cy;
        const int x0 = static_cast<int>(std::floor(sx));
        const int y0 = static_cast<int>(std::floor(sy));
        const double fx = sx - x0;
        const double fy = sy - y0;
        auto mix = [&](auto member) {
          const double a = img.clamped(x0, y0).*member;
          const double b = img.clamped(x0 + 1, y0).*member;
          const double cc = img.clamped(x0, y0 + 1).*member;
          const double d = img.clamped(x0 + 1, y0 + 1).*member;
          return detail::channel((a * (1 - fx) + b * fx) * (1 - fy) + (cc * (1 - fx) + d * fx) * fy);
        };
        out.at(x, y) = {mix(&Rgb::r), mix(&Rgb::g), mix(&Rgb::b)};
      }
    }
  }
  if (t.noise_p > 0.0) {
    Rng rng({t.seed, 0x7015e});
    for (auto& px : out.pixels()) {
      if (rng.uniform() < t.noise_p) {
        px = rng.uniform() < 0.5 ? Rgb{255, 255, 255} : Rgb{0, 0, 0};
      }
    }
  }
  return out;
}

// ".gt" sidecar: "GT 1", "branches <k>", then k lines "<x> <y>".
inline std::string format_ground_truth(const GroundTruth& gt) {
  std::string out = "GT 1\nbranches " + std::to_string(gt.branch_points.size()) + "\n";
  for (const auto& b : gt.branch_points) {
    out += detail::fixed6(b.x) + " " + detail::fixed6(b.y) + "\n";
  }
  return out;
}

inline GroundTruth parse_ground_truth(const std::string& text) {
  const auto lines = detail::split_lines(text);
  if (lines.size() < 2 || lines[0] != "GT 1") throw FormatError("gt: missing 'GT 1' header");
  if (lines[1].rfind("branches ", 0) != 0) throw FormatError("gt: missing 'branches' line");
  const auto k = detail::parse_count(std::string_view(lines[1]).substr(9), "gt");
  if (lines.size() != static_cast<std::size_t>(k) + 2) throw FormatError("gt: wrong number of lines");
  GroundTruth gt;
  for (long long i = 0; i < k; ++i) {
    const auto toks = detail::split_spaces(lines[2 + i]);
    if (toks.size() != 2) throw FormatError("gt: branch line needs 2 fields");
    gt.branch_points.push_back({detail::parse_double(toks[0], "gt"), detail::parse_double(toks[1], "gt")});
  }
  return gt;
}

// Dataset protocol: sample 0 of an identity is the clean rendering, later
// samples are rigid re-captures with mild impulse noise.
struct DatasetProtocol {
  double max_rotation_deg = 10.0;
  double max_translation = 15.0;
  double max_noise_p = 0.004;
};

inline SynthParams identity_params(std::uint64_t seed, int identity) {
  Rng rng({seed, static_cast<std::uint64_t>(identity), 0x1d});
  SynthParams p;
  p.seed = rng.next();
  p.branch_count = rng.uniform_int(6, 12);
  p.wander = rng.uniform(3.0, 7.0);
  p.vein_thickness = rng.uniform_int(2, 5);
  return p;
}

inline Perturbation sample_perturbation(std::uint64_t seed, int identity, int sample,
                                        const DatasetProtocol& proto = {}) {
  if (sample == 0) return {};
  Rng rng({seed, static_cast<std::uint64_t>(identity), static_cast<std::uint64_t>(sample), 0x5a});
  Perturbation t;
  t.rotation_deg = rng.uniform(-proto.max_rotation_deg, proto.max_rotation_deg);
  t.tx = rng.uniform(-proto.max_translation, proto.max_translation);
  t.ty = rng.uniform(-proto.max_translation, proto.max_translation);
  t.noise_p = rng.uniform(0.0, proto.max_noise_p);
  t.seed = rng.next();
  return t;
}

inline SynthSample dataset_sample(std::uint64_t seed, int identity, int sample,
                                  const DatasetProtocol& proto = {}) {
  const auto params = identity_params(seed, identity);
  const auto base = generate_identity(params);
  const auto t = sample_perturbation(seed, identity, sample, proto);
  if (sample == 0) return base;
  return {perturb(base.image, t), perturb_truth(base.truth, t, params.width, params.height)};
}

}  // namespace veinid
