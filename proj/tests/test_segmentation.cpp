#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "veinid/segmentation.hpp"
#include "veinid/synth.hpp"

using namespace veinid;

namespace {

ColorImage disk_image(int size, double radius) {
  ColorImage img(size, size);
  const double c = (size - 1) / 2.0;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      if (std::hypot(x - c, y - c) <= radius) img.at(x, y) = {255, 255, 255};
    }
  }
  return img;
}

double max_radial_error(const Contour& c, Point2 centre, double radius) {
  double worst = 0.0;
  for (const auto& p : c.points) {
    worst = std::max(worst, std::abs(std::hypot(p.x - centre.x, p.y - centre.y) - radius));
  }
  return worst;
}

EnergyField zero_field(int w, int h) {
  return {Raster<double>(w, h), Raster<double>(w, h), Raster<double>(w, h)};
}

}  // namespace

TEST(ExternalEnergy, UniformImageGivesZeroField) {
  const auto f = external_energy(ColorImage(8, 8, Rgb{90, 120, 30}));
  for (double v : f.values.pixels()) EXPECT_EQ(v, 0.0);
  for (double v : f.grad_x.pixels()) EXPECT_EQ(v, 0.0);
  for (double v : f.grad_y.pixels()) EXPECT_EQ(v, 0.0);
}

TEST(ExternalEnergy, StepEdgeIsTheMinimum) {
  ColorImage img(10, 6);
  for (int y = 0; y < 6; ++y) {
    for (int x = 5; x < 10; ++x) img.at(x, y) = {200, 200, 200};
  }
  const auto f = external_energy(img);
  double lowest = 0.0;
  for (double v : f.values.pixels()) lowest = std::min(lowest, v);
  EXPECT_LT(lowest, 0.0);
  for (int y = 0; y < 6; ++y) {
    // The two columns that straddle the edge carry the minimum.
    EXPECT_EQ(f.values.at(4, y), lowest);
    EXPECT_EQ(f.values.at(5, y), lowest);
    EXPECT_EQ(f.values.at(0, y), 0.0);
    EXPECT_EQ(f.values.at(9, y), 0.0);
  }
  EXPECT_THROW(external_energy(ColorImage(2, 5)), ImageTooSmall);
}

TEST(EvolveSnake, CircleShrinksUnderElasticityAlone) {
  const auto field = zero_field(100, 100);
  SnakeParams p;
  p.balloon = 0.0;
  p.max_iters = 1;
  auto c = circle_contour({50, 50}, 30, 64);
  double r_prev = 30.0;
  double perimeter_prev = perimeter(c);
  for (int it = 0; it < 50; ++it) {
    c = evolve_snake(field, c, p).contour;
    ASSERT_EQ(c.size(), 64u);
    double r = 0.0;
    for (const auto& q : c.points) r += std::hypot(q.x - 50, q.y - 50);
    r /= 64.0;
    ASSERT_LT(r, r_prev) << it;
    ASSERT_LE(perimeter(c), perimeter_prev) << it;
    r_prev = r;
    perimeter_prev = perimeter(c);
  }
}

TEST(EvolveSnake, DiskRadius40FromSmallCircle) {
  const auto img = disk_image(256, 40);
  const Point2 centre{127.5, 127.5};
  const auto r = evolve_snake(external_energy(img), circle_contour(centre, 5, 100), SnakeParams{});
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.contour.size(), 100u);
  EXPECT_LE(max_radial_error(r.contour, centre, 40), 2.0);
}

TEST(EvolveSnake, StopsEarlyOnARidge) {
  const auto img = disk_image(128, 30);
  const Point2 centre{63.5, 63.5};
  SnakeParams p;
  p.balloon = 0.0;
  // Start exactly where the gradient is strongest: the disk outline.
  const auto r = evolve_snake(external_energy(img), circle_contour(centre, 30, 100), p);
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.iterations, p.max_iters);
  EXPECT_LE(max_radial_error(r.contour, centre, 30), 2.0);
}

TEST(EvolveSnake, PointsStayInsideTheField) {
  // Balloon with nothing to stop it: the contour runs into the frame.
  SnakeParams p;
  p.max_iters = 400;
  const auto r = evolve_snake(zero_field(40, 30), circle_contour({20, 15}, 5, 32), p);
  ASSERT_EQ(r.contour.size(), 32u);
  for (const auto& q : r.contour.points) {
    EXPECT_GE(q.x, 0.0);
    EXPECT_LE(q.x, 39.0);
    EXPECT_GE(q.y, 0.0);
    EXPECT_LE(q.y, 29.0);
  }
}

TEST(EvolveSnake, RejectsBadInput) {
  const auto field = zero_field(20, 20);
  EXPECT_THROW(evolve_snake(field, circle_contour({10, 10}, 3, 8), SnakeParams{}), InvalidParameter);
  SnakeParams p;
  p.step = 0.0;
  EXPECT_THROW(evolve_snake(field, circle_contour({10, 10}, 3, 16), p), InvalidParameter);
}

TEST(AutoSegment, DisksOfSeveralRadii) {
  for (double radius : {20.0, 40.0, 60.0}) {
    const auto seg = auto_segment(disk_image(256, radius), SnakeParams{});
    EXPECT_LE(max_radial_error(seg.contour, {127.5, 127.5}, radius), 2.0) << radius;
  }
}

TEST(AutoSegment, RectangleCropWithinFivePixels) {
  ColorImage img(200, 160);
  const int x0 = 50, y0 = 40, x1 = 149, y1 = 119;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) img.at(x, y) = {230, 210, 200};
  }
  const auto seg = auto_segment(img, SnakeParams{});
  EXPECT_NEAR(seg.crop.x0, x0 - 5, 3);
  EXPECT_NEAR(seg.crop.y0, y0 - 5, 3);
  EXPECT_NEAR(seg.crop.x0 + seg.crop.width - 1, x1 + 5, 3);
  EXPECT_NEAR(seg.crop.y0 + seg.crop.height - 1, y1 + 5, 3);
  EXPECT_EQ(seg.roi.width(), seg.crop.width);
  EXPECT_EQ(seg.roi.height(), seg.crop.height);
}

TEST(AutoSegment, FullFrameBrightImage) {
  const ColorImage img(120, 90, Rgb{240, 240, 240});
  const auto seg = auto_segment(img, SnakeParams{});
  EXPECT_EQ(seg.crop, (Box{0, 0, 120, 90}));
}

TEST(AutoSegment, CropBelow32IsAnEmptyROI) {
  EXPECT_THROW(auto_segment(ColorImage(24, 60, Rgb{200, 200, 200}), SnakeParams{}), EmptyROI);
  EXPECT_THROW(auto_segment(ColorImage(2, 60), SnakeParams{}), ImageTooSmall);
}

TEST(AutoSegment, SyntheticHandKeepsEveryVeinPixel) {
  for (int identity = 0; identity < 3; ++identity) {
    const auto sample = dataset_sample(42, identity, 0);
    const auto seg = auto_segment(sample.image, SnakeParams{});
    const auto& b = seg.crop;
    for (const auto& edge : sample.truth.tree_edges) {
      for (const auto& q : edge.points) {
        ASSERT_GE(q.x - 3, b.x0) << identity;
        ASSERT_GE(q.y - 3, b.y0) << identity;
        ASSERT_LE(q.x + 3, b.x0 + b.width - 1) << identity;
        ASSERT_LE(q.y + 3, b.y0 + b.height - 1) << identity;
      }
    }
  }
}

TEST(RemoveBoundaryStrokes, HollowSquareVanishes) {
  BinaryImage img(20, 20);
  for (int i = 2; i <= 17; ++i) {
    img.at(i, 2) = img.at(i, 17) = img.at(2, i) = img.at(17, i) = 1;
  }
  EXPECT_EQ(remove_boundary_strokes(img, 1), BinaryImage(20, 20));
}

TEST(RemoveBoundaryStrokes, VeinInsideOutlineLosesItsEnds) {
  BinaryImage img(20, 20);
  for (int i = 2; i <= 17; ++i) {
    img.at(i, 2) = img.at(i, 17) = img.at(2, i) = img.at(17, i) = 1;
  }
  for (int x = 2; x <= 17; ++x) img.at(x, 10) = 1;
  // The vein's end pixels sit on the outline; the rest of it survives.
  BinaryImage expect(20, 20);
  for (int x = 3; x <= 16; ++x) expect.at(x, 10) = 1;
  EXPECT_EQ(remove_boundary_strokes(img, 5), expect);
  // At the default fragment size the 14-pixel vein is pruned too.
  EXPECT_EQ(remove_boundary_strokes(img), BinaryImage(20, 20));
}

TEST(RemoveBoundaryStrokes, EmptyStaysEmpty) {
  EXPECT_EQ(remove_boundary_strokes(BinaryImage(7, 5)), BinaryImage(7, 5));
}

TEST(RemoveBoundaryStrokes, ClearsScanEndsOnRandomImages) {
  std::mt19937 rng(5);
  std::bernoulli_distribution bit(0.3);
  for (int trial = 0; trial < 50; ++trial) {
    BinaryImage img(24, 18);
    for (auto& p : img.pixels()) p = bit(rng) ? 1 : 0;
    const auto out = remove_boundary_strokes(img, 1);
    for (std::size_t i = 0; i < img.size(); ++i) ASSERT_LE(out.pixels()[i], img.pixels()[i]);
    for (int y = 0; y < img.height(); ++y) {
      int first = -1, last = -1;
      for (int x = 0; x < img.width(); ++x) {
        if (img.at(x, y)) {
          if (first < 0) first = x;
          last = x;
        }
      }
      if (first >= 0) {
        ASSERT_EQ(out.at(first, y), 0);
        ASSERT_EQ(out.at(last, y), 0);
      }
    }
    for (int x = 0; x < img.width(); ++x) {
      int first = -1, last = -1;
      for (int y = 0; y < img.height(); ++y) {
        if (img.at(x, y)) {
          if (first < 0) first = y;
          last = y;
        }
      }
      if (first >= 0) {
        ASSERT_EQ(out.at(x, first), 0);
        ASSERT_EQ(out.at(x, last), 0);
      }
    }
  }
}

TEST(Contour, CircleHelpers) {
  const auto c = circle_contour({0, 0}, 10, 400);
  EXPECT_NEAR(perimeter(c), 2 * std::numbers::pi * 10, 0.01);
  EXPECT_NEAR(std::abs(signed_area(c)), std::numbers::pi * 100, 0.5);
  EXPECT_TRUE(is_simple(c));
  Contour bow;
  bow.points = {{0, 0}, {10, 10}, {10, 0}, {0, 10}};
  EXPECT_FALSE(is_simple(bow));
}
