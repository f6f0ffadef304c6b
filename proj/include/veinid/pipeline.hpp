#pragma once

// Image -> template: segmentation, grey chain, binarization, thinning,
// outline removal, forking extraction and normalization.

#include <cmath>
#include <string>

#include "veinid/components.hpp"
#include "veinid/filters.hpp"
#include "veinid/matching.hpp"
#include "veinid/minutiae.hpp"
#include "veinid/segmentation.hpp"
#include "veinid/thinning.hpp"

namespace veinid {

struct PipelineConfig {
  SnakeParams snake;
  std::size_t snake_points = 100;
  int crop_margin = 5;
  // Grey median applied to the crop before smoothing; 0 turns it off.
  int impulse_median = 3;
  double gaussian_sigma = 1.5;
  double norm_mean = 100.0;
  double norm_variance = 100.0;
  int binarize_window = 9;
  int median_window = 3;
  int dilate_radius = 2;
  int spur_length = 10;  // 0 keeps every spur
  int prune_min_size = kDefaultPruneSize;
  double merge_radius = kMergeRadius;
  MatchParams match;

  void validate() const {
    snake.validate();
    match.validate();
    auto odd_window = [](int w) { return w >= 3 && w % 2 == 1; };
    if (snake_points < kMinContourPoints) throw InvalidParameter("config: snake_points must be >= 16");
    if (crop_margin < 0) throw InvalidParameter("config: crop_margin must be >= 0");
    if (impulse_median != 0 && !odd_window(impulse_median)) {
      throw InvalidParameter("config: impulse_median must be 0 or an odd window >= 3");
    }
    if (!(gaussian_sigma > 0.0)) throw InvalidParameter("config: gaussian_sigma must be > 0");
    if (!std::isfinite(norm_mean)) throw InvalidParameter("config: norm_mean must be finite");
    if (!(norm_variance >= 0.0)) throw InvalidParameter("config: norm_variance must be >= 0");
    if (!odd_window(binarize_window)) throw InvalidParameter("config: binarize_window must be odd, >= 3");
    if (!odd_window(median_window)) throw InvalidParameter("config: median_window must be odd, >= 3");
    if (dilate_radius < 1) throw InvalidParameter("config: dilate_radius must be >= 1");
    if (spur_length < 0) throw InvalidParameter("config: spur_length must be >= 0");
    if (prune_min_size < 1) throw InvalidParameter("config: prune_min_size must be >= 1");
    if (!(merge_radius >= 0.0)) throw InvalidParameter("config: merge_radius must be >= 0");
  }

  SegmentOptions segment_options() const {
    SegmentOptions opt;
    opt.contour_points = snake_points;
    opt.crop_margin = crop_margin;
    return opt;
  }
};

// Every intermediate raster, for inspection and tests.
struct PipelineTrace {
  SegmentResult segment;
  GrayImage enhanced;
  GrayImage normalized;
  BinaryImage binary;
  BinaryImage denoised;
  BinaryImage dilated;
  BinaryImage skeleton;
  BinaryImage despurred;
  BinaryImage pruned;
  BinaryImage venal_tree;
  // Minutiae in full-image coordinates, before normalization.
  Template raw;
  Template normalized_template;
};

inline PipelineTrace run_pipeline(const ColorImage& img, const PipelineConfig& cfg,
                                  const std::string& source_id = {}) {
  cfg.validate();
  PipelineTrace t;
  t.segment = auto_segment(img, cfg.snake, cfg.segment_options());
  const GrayImage& roi = t.segment.roi;
  t.enhanced = gaussian_smooth(
      cfg.impulse_median > 0 ? median_smooth(roi, cfg.impulse_median) : roi, cfg.gaussian_sigma);
  t.normalized = normalize(t.enhanced, cfg.norm_mean, cfg.norm_variance);
  t.binary = binarize_mean(t.normalized, cfg.binarize_window);
  t.denoised = median_denoise(t.binary, cfg.median_window);
  t.dilated = dilate_disk(t.denoised, cfg.dilate_radius);
  t.skeleton = skeletonize(t.dilated);
  t.despurred = remove_spurs(t.skeleton, cfg.spur_length);
  t.pruned = prune_components(t.despurred, cfg.prune_min_size);
  t.venal_tree = remove_boundary_strokes(t.pruned, cfg.prune_min_size);

  t.raw = extract_minutiae(t.venal_tree, cfg.merge_radius);
  const double ox = t.segment.crop.x0;
  const double oy = t.segment.crop.y0;
  for (auto& m : t.raw.minutiae) {
    m.x += ox;
    m.y += oy;
  }
  t.raw.ref_x += ox;
  t.raw.ref_y += oy;
  t.raw.source_id = source_id;
  t.normalized_template = normalize_template(t.raw);
  return t;
}

inline Template extract_template(const ColorImage& img, const PipelineConfig& cfg,
                                 const std::string& source_id = {}) {
  return run_pipeline(img, cfg, source_id).normalized_template;
}

}  // namespace veinid
