#pragma once

// 8-connected component labelling and small-component pruning.

#include <cstdint>
#include <vector>

#include "veinid/error.hpp"
#include "veinid/image.hpp"

namespace veinid {

struct ComponentLabels {
  // 0 = background, components numbered from 1 in raster order of their
  // first pixel.
  Raster<int> labels;
  // sizes[k] = pixel count of component k; sizes[0] is unused.
  std::vector<std::size_t> sizes{0};

  std::size_t count() const { return sizes.size() - 1; }
};

inline ComponentLabels label_components(const BinaryImage& img) {
  ComponentLabels out{Raster<int>(img.width(), img.height()), {0}};
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (!img.at(x, y) || out.labels.at(x, y) != 0) continue;
      const int label = static_cast<int>(out.sizes.size());
      std::size_t size = 0;
      out.labels.at(x, y) = label;
      stack.emplace_back(x, y);
      while (!stack.empty()) {
        const auto [cx, cy] = stack.back();
        stack.pop_back();
        ++size;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = cx + dx;
            const int ny = cy + dy;
            if (!img.contains(nx, ny) || !img.at(nx, ny)) continue;
            if (out.labels.at(nx, ny) != 0) continue;
            out.labels.at(nx, ny) = label;
            stack.emplace_back(nx, ny);
          }
        }
      }
      out.sizes.push_back(size);
    }
  }
  return out;
}

inline std::size_t count_components(const BinaryImage& img) {
  return label_components(img).count();
}

// Drops every 8-connected component with fewer than `min_size` pixels.
inline BinaryImage prune_components(const BinaryImage& img, int min_size) {
  if (min_size < 1) throw InvalidParameter("prune_components: min_size must be >= 1");
  const auto cc = label_components(img);
  BinaryImage out(img.width(), img.height());
  auto labels = cc.labels.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int l = labels[i];
    if (l != 0 && cc.sizes[l] >= static_cast<std::size_t>(min_size)) dst[i] = 1;
  }
  return out;
}

}  // namespace veinid
