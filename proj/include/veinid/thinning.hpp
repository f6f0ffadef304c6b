#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "veinid/error.hpp"
#include "veinid/image.hpp"

namespace veinid {

// 3x3 window around a pixel. p[0..7] hold P1..P8, scanned anti-clockwise
// starting east:
//
//   P4 P3 P2
//   P5 P  P1
//   P6 P7 P8
struct Neighborhood {
  std::uint8_t center = 0;
  std::array<std::uint8_t, 8> p{};

  // Bit i set <=> P(i+1) is foreground.
  std::uint8_t mask() const {
    std::uint8_t m = 0;
    for (int i = 0; i < 8; ++i) {
      if (p[i]) m |= static_cast<std::uint8_t>(1u << i);
    }
    return m;
  }

  static Neighborhood from_mask(std::uint8_t m, std::uint8_t center = 1) {
    Neighborhood nb;
    nb.center = center;
    for (int i = 0; i < 8; ++i) nb.p[i] = (m >> i) & 1u;
    return nb;
  }
};

// (dx, dy) of P1..P8; y grows downwards.
inline constexpr std::array<std::array<int, 2>, 8> kNeighborOffsets{{
    {1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1}}};

// Pixels outside the raster read as background.
inline Neighborhood neighborhood_at(const BinaryImage& img, int x, int y) {
  Neighborhood nb;
  nb.center = img.or_zero(x, y) ? 1 : 0;
  for (int i = 0; i < 8; ++i) {
    nb.p[i] = img.or_zero(x + kNeighborOffsets[i][0], y + kNeighborOffsets[i][1]) ? 1 : 0;
  }
  return nb;
}

namespace detail {

inline int foreground_neighbors(const Neighborhood& nb) {
  int b = 0;
  for (auto v : nb.p) b += v;
  return b;
}

// Number of 0 -> 1 transitions around P1..P8..P1.
inline int zero_one_transitions(const Neighborhood& nb) {
  int a = 0;
  for (int i = 0; i < 8; ++i) {
    if (!nb.p[i] && nb.p[(i + 1) % 8]) ++a;
  }
  return a;
}

// Yokoi 8-connectivity number; the centre is a simple point iff it is 1.
inline int connectivity_number(const Neighborhood& nb) {
  int n = 0;
  for (int k = 0; k < 8; k += 2) {
    const int a = 1 - nb.p[k];
    const int b = 1 - nb.p[(k + 1) % 8];
    const int c = 1 - nb.p[(k + 2) % 8];
    n += a - a * b * c;
  }
  return n;
}

inline bool is_deletable_now(const BinaryImage& img, int x, int y) {
  const auto nb = neighborhood_at(img, x, y);
  return foreground_neighbors(nb) >= 2 && connectivity_number(nb) == 1;
}

// Zhang-Suen candidate test. pass 0 is the south-east sub-iteration,
// pass 1 the north-west one.
inline bool zhang_suen_candidate(const Neighborhood& nb, int pass) {
  const int b = foreground_neighbors(nb);
  if (b < 2 || b > 6) return false;
  if (zero_one_transitions(nb) != 1) return false;
  const int e = nb.p[0], n = nb.p[2], w = nb.p[4], s = nb.p[6];
  if (pass == 0) return n * e * s == 0 && e * s * w == 0;
  return n * e * w == 0 && n * s * w == 0;
}

inline bool in_full_block(const BinaryImage& img, int x, int y) {
  for (int oy = -1; oy <= 0; ++oy) {
    for (int ox = -1; ox <= 0; ++ox) {
      if (img.or_zero(x + ox, y + oy) && img.or_zero(x + ox + 1, y + oy) &&
          img.or_zero(x + ox, y + oy + 1) && img.or_zero(x + ox + 1, y + oy + 1)) {
        return true;
      }
    }
  }
  return false;
}

// True if removing (x, y) leaves all of its foreground neighbours in one
// 8-connected piece of the remaining image. The search stops as soon as
// every neighbour has been reached.
inline bool neighbors_stay_connected(BinaryImage& img, int x, int y) {
  std::vector<int> targets;
  for (const auto& [dx, dy] : kNeighborOffsets) {
    if (img.or_zero(x + dx, y + dy)) targets.push_back((y + dy) * img.width() + x + dx);
  }
  if (targets.size() < 2) return !targets.empty();
  img.at(x, y) = 0;
  std::unordered_set<int> seen{targets.front()};
  std::unordered_set<int> pending(targets.begin() + 1, targets.end());
  std::vector<int> stack{targets.front()};
  while (!stack.empty() && !pending.empty()) {
    const int idx = stack.back();
    stack.pop_back();
    const int cx = idx % img.width();
    const int cy = idx / img.width();
    for (const auto& [dx, dy] : kNeighborOffsets) {
      if (!img.or_zero(cx + dx, cy + dy)) continue;
      const int n = (cy + dy) * img.width() + cx + dx;
      if (seen.insert(n).second) {
        pending.erase(n);
        stack.push_back(n);
      }
    }
  }
  img.at(x, y) = 1;
  return pending.empty();
}

// Pixels cut off from the rest of the 2x2 block at (bx, by) (top-left)
// when block pixel (x, y) is removed: everything reachable from its other
// neighbours without passing through (x, y) or touching the block.
inline std::vector<int> hanging_from(BinaryImage& img, int bx, int by, int x, int y) {
  const int w = img.width();
  auto in_block = [&](int px, int py) { return px >= bx && px <= bx + 1 && py >= by && py <= by + 1; };
  img.at(x, y) = 0;
  std::vector<int> piece;
  std::unordered_set<int> seen;
  for (const auto& [dx, dy] : kNeighborOffsets) {
    const int sx = x + dx;
    const int sy = y + dy;
    if (!img.or_zero(sx, sy) || in_block(sx, sy) || seen.count(sy * w + sx)) continue;
    std::vector<int> part{sy * w + sx};
    std::unordered_set<int> local{sy * w + sx};
    bool attached = false;
    for (std::size_t k = 0; k < part.size() && !attached; ++k) {
      const int cx = part[k] % w;
      const int cy = part[k] / w;
      for (const auto& [ex, ey] : kNeighborOffsets) {
        const int nx = cx + ex;
        const int ny = cy + ey;
        if (!img.or_zero(nx, ny)) continue;
        if (in_block(nx, ny) || seen.count(ny * w + nx)) {
          attached = true;
          break;
        }
        if (local.insert(ny * w + nx).second) part.push_back(ny * w + nx);
      }
    }
    if (attached) continue;
    seen.insert(local.begin(), local.end());
    piece.insert(piece.end(), part.begin(), part.end());
  }
  img.at(x, y) = 1;
  return piece;
}

// Clears one pixel of a 2x2 block where every pixel carries a branch that
// hangs from it alone. The pixel with the smallest branch goes, and the
// branch with it, so the component stays whole. Returns false if the image
// has no 2x2 block.
inline bool break_forced_block(BinaryImage& img) {
  for (int y = 0; y + 1 < img.height(); ++y) {
    for (int x = 0; x + 1 < img.width(); ++x) {
      if (!(img.at(x, y) && img.at(x + 1, y) && img.at(x, y + 1) && img.at(x + 1, y + 1))) continue;
      std::vector<int> best;
      int best_x = x;
      int best_y = y;
      bool first = true;
      for (const auto& [px, py] : {std::pair{x, y}, {x + 1, y}, {x, y + 1}, {x + 1, y + 1}}) {
        auto piece = hanging_from(img, x, y, px, py);
        if (first || piece.size() < best.size()) {
          best = std::move(piece);
          best_x = px;
          best_y = py;
          first = false;
        }
      }
      for (int idx : best) img.at(idx % img.width(), idx / img.width()) = 0;
      img.at(best_x, best_y) = 0;
      return true;
    }
  }
  return false;
}

}  // namespace detail

// Zhang-Suen thinning to a fixpoint. Candidates of each sub-iteration are
// chosen on a snapshot, then removed one at a time, fewest neighbours
// first, only while they are still simple points and not end points, so
// 8-connectivity is kept exactly.
// A final sweep clears 2x2 blocks wherever a block pixel can go without
// splitting its component. A block whose four pixels each carry a private
// branch cannot lose a pixel on its own; there the smallest such branch is
// removed along with its block pixel, trading that branch for thinness.
inline BinaryImage skeletonize(const BinaryImage& input) {
  BinaryImage img = input;
  const int w = img.width();
  const int h = img.height();
  std::vector<std::pair<int, std::pair<int, int>>> candidates;  // (neighbours, (x, y))
  bool changed = true;
  while (changed) {
    changed = false;
    for (int pass = 0; pass < 2; ++pass) {
      candidates.clear();
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          if (!img.at(x, y)) continue;
          const auto nb = neighborhood_at(img, x, y);
          if (detail::zhang_suen_candidate(nb, pass)) {
            candidates.push_back({detail::foreground_neighbors(nb), {x, y}});
          }
        }
      }
      // Corners before edges, as a parallel step would see them.
      std::stable_sort(candidates.begin(), candidates.end(), [&](const auto& a, const auto& b) {
        return a.first < b.first;
      });
      for (const auto& [b, xy] : candidates) {
        const auto [x, y] = xy;
        if (detail::is_deletable_now(img, x, y)) {
          img.at(x, y) = 0;
          changed = true;
        }
      }
    }
    if (changed) continue;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (img.at(x, y) && detail::in_full_block(img, x, y) &&
            detail::neighbors_stay_connected(img, x, y)) {
          img.at(x, y) = 0;
          changed = true;
        }
      }
    }
    if (!changed) changed = detail::break_forced_block(img);
  }
  return img;
}

// Deletes end branches of at most `max_length` pixels that run from an end
// point (one 0->1 transition) into a junction (three or more). Thinning
// leaves such spurs on wide strokes. Free-standing segments are kept, and
// every decision is taken on the input, so one call is a single pass.
inline BinaryImage remove_spurs(const BinaryImage& skel, int max_length) {
  if (max_length < 0) throw InvalidParameter("remove_spurs: max_length must be >= 0");
  BinaryImage out = skel;
  if (max_length == 0) return out;
  const int w = skel.width();
  const int h = skel.height();
  auto transitions = [&](int x, int y) {
    return detail::zero_one_transitions(neighborhood_at(skel, x, y));
  };
  std::vector<std::pair<int, int>> path;
  std::vector<std::pair<int, int>> seen;
  auto was_seen = [&](int x, int y) {
    return std::find(seen.begin(), seen.end(), std::pair{x, y}) != seen.end();
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!skel.at(x, y) || transitions(x, y) != 1) continue;
      path.assign(1, {x, y});
      seen.assign(1, {x, y});
      bool spur = false;
      while (static_cast<int>(path.size()) <= max_length) {
        const auto [cx, cy] = path.back();
        int next = -1;
        bool junction = false;
        // Axis neighbours first, so a staircase is walked pixel by pixel.
        for (int k : {0, 2, 4, 6, 1, 3, 5, 7}) {
          const int nx = cx + kNeighborOffsets[k][0];
          const int ny = cy + kNeighborOffsets[k][1];
          if (!skel.or_zero(nx, ny) || was_seen(nx, ny)) continue;
          if (transitions(nx, ny) >= 3) junction = true;
          if (next < 0) next = k;
          seen.emplace_back(nx, ny);
        }
        if (junction) {
          spur = true;
          break;
        }
        if (next < 0) break;
        path.emplace_back(cx + kNeighborOffsets[next][0], cy + kNeighborOffsets[next][1]);
      }
      if (spur) {
        for (const auto& [px, py] : path) out.at(px, py) = 0;
      }
    }
  }
  return out;
}

}  // namespace veinid
