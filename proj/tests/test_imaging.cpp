#include <gtest/gtest.h>

#include <cmath>
#include <queue>
#include <random>
#include <string>

#include "veinid/components.hpp"
#include "veinid/filters.hpp"
#include "veinid/pnm.hpp"

using namespace veinid;

namespace {

BinaryImage random_binary(int w, int h, double density, std::mt19937_64& rng) {
  std::bernoulli_distribution bit(density);
  BinaryImage img(w, h);
  for (auto& p : img.pixels()) p = bit(rng) ? 1 : 0;
  return img;
}

// Independent flood fill with an explicit queue: keeps components of at
// least min_size pixels.
BinaryImage flood_fill_filter(const BinaryImage& img, int min_size) {
  BinaryImage out(img.width(), img.height());
  Raster<int> seen(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (!img.at(x, y) || seen.at(x, y)) continue;
      std::vector<std::pair<int, int>> comp;
      std::queue<std::pair<int, int>> q;
      q.push({x, y});
      seen.at(x, y) = 1;
      while (!q.empty()) {
        auto [cx, cy] = q.front();
        q.pop();
        comp.push_back({cx, cy});
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = cx + dx, ny = cy + dy;
            if (img.or_zero(nx, ny) && !seen.at(nx, ny)) {
              seen.at(nx, ny) = 1;
              q.push({nx, ny});
            }
          }
        }
      }
      if (static_cast<int>(comp.size()) >= min_size) {
        for (auto [cx, cy] : comp) out.at(cx, cy) = 1;
      }
    }
  }
  return out;
}

}  // namespace

TEST(Raster, RejectsNegativeSize) { EXPECT_THROW(GrayImage(-1, 3), InvalidParameter); }

TEST(Grayscale, BlackWhiteAndHandValue) {
  EXPECT_EQ(to_grayscale(ColorImage(4, 3, {0, 0, 0})), GrayImage(4, 3, 0.0));
  const auto white = to_grayscale(ColorImage(4, 3, {255, 255, 255}));
  for (double v : white.pixels()) EXPECT_NEAR(v, 255.0, 0.1);
  // 0.2989*100 + 0.5870*200 + 0.1140*50 = 153.00
  const auto g = to_grayscale(ColorImage(1, 1, {100, 200, 50}));
  EXPECT_NEAR(g.at(0, 0), 153.0, 0.1);
}

TEST(ColorGradient, ConstantImageIsZero) {
  const auto f = color_gradient(ColorImage(8, 8, {40, 90, 200}));
  for (double v : f.magnitude.pixels()) EXPECT_EQ(v, 0.0);
}

TEST(ColorGradient, TooSmall) {
  EXPECT_THROW(color_gradient(ColorImage(2, 5)), ImageTooSmall);
  EXPECT_THROW(color_gradient(ColorImage(5, 2)), ImageTooSmall);
}

TEST(ColorGradient, SingleBandEqualsThatBand) {
  ColorImage img(9, 7, {10, 10, 10});
  for (int y = 0; y < 7; ++y) {
    for (int x = 0; x < 9; ++x) img.at(x, y).r = static_cast<std::uint8_t>(10 + 7 * x + 3 * y * y);
  }
  const auto f = color_gradient(img);
  const auto red = split_channels(img)[0];
  const std::array<GrayImage, 1> only_red{red};
  EXPECT_EQ(f.magnitude, max_band_gradient(only_red).magnitude);
  EXPECT_GT(f.magnitude.at(4, 3), 0.0);
}

TEST(ColorGradient, StepEdgePeaksNextToTheEdge) {
  // G jumps 0 -> 255 at column c = 5; the 3x3 Sobel window straddles the
  // step only on columns 4 and 5, where |gx| = 4*255/8.
  ColorImage img(10, 6);
  for (int y = 0; y < 6; ++y) {
    for (int x = 5; x < 10; ++x) img.at(x, y).g = 255;
  }
  const auto f = color_gradient(img);
  for (int y = 0; y < 6; ++y) {
    EXPECT_DOUBLE_EQ(f.magnitude.at(4, y), 127.5);
    EXPECT_DOUBLE_EQ(f.magnitude.at(5, y), 127.5);
    EXPECT_EQ(f.magnitude.at(3, y), 0.0);
    EXPECT_EQ(f.magnitude.at(6, y), 0.0);
  }
}

TEST(Gaussian, ConstantPreserved) {
  for (double sigma : {0.5, 1.0, 2.5}) {
    const auto out = gaussian_smooth(GrayImage(12, 9, 77.25), sigma);
    for (double v : out.pixels()) EXPECT_NEAR(v, 77.25, 1e-9);
  }
}

TEST(Gaussian, ImpulseGivesKernel) {
  GrayImage img(15, 15, 0.0);
  img.at(7, 7) = 1.0;
  const auto out = gaussian_smooth(img, 1.0);
  const auto k = gaussian_kernel(1.0);
  ASSERT_EQ(k.size(), 7u);  // radius ceil(3 * 1)
  double sum = 0.0;
  for (int y = 0; y < 15; ++y) {
    for (int x = 0; x < 15; ++x) {
      const int dx = x - 7, dy = y - 7;
      const double expect =
          (std::abs(dx) <= 3 && std::abs(dy) <= 3) ? k[dx + 3] * k[dy + 3] : 0.0;
      EXPECT_NEAR(out.at(x, y), expect, 1e-12);
      sum += out.at(x, y);
    }
  }
  EXPECT_NEAR(sum, 1.0, 1e-6);
}

TEST(Gaussian, BadSigma) {
  EXPECT_THROW(gaussian_smooth(GrayImage(5, 5), 0.0), InvalidParameter);
  EXPECT_THROW(gaussian_smooth(GrayImage(5, 5), -1.0), InvalidParameter);
}

TEST(Normalize, HitsTargetStatistics) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  GrayImage img(40, 30);
  for (auto& p : img.pixels()) p = u(rng);
  const auto s = statistics(normalize(img, 100.0, 100.0));
  EXPECT_NEAR(s.mean, 100.0, 0.5);
  EXPECT_NEAR(s.variance, 100.0, 2.0);
}

TEST(Normalize, FixedPointAndDegenerate) {
  GrayImage img(2, 1);
  img.at(0, 0) = 90.0;
  img.at(1, 0) = 110.0;  // mean 100, variance 100
  EXPECT_EQ(normalize(img, 100.0, 100.0), img);
  EXPECT_EQ(normalize(GrayImage(4, 4, 12.0), 100.0, 0.0), GrayImage(4, 4, 100.0));
  EXPECT_THROW(normalize(GrayImage(4, 4, 12.0), 100.0, 100.0), DegenerateImage);
}

TEST(BinarizeMean, ConstantIsBackground) {
  EXPECT_EQ(count_foreground(binarize_mean(GrayImage(16, 16, 100.0), 9)), 0u);
}

TEST(BinarizeMean, DarkLineOnBrightField) {
  // 16x16 field at 200 with a 0-valued row 8. Every window around the line
  // averages above 0; a far pixel's window holds only 200s (a tie).
  GrayImage img(16, 16, 200.0);
  for (int x = 0; x < 16; ++x) img.at(x, 8) = 0.0;
  const auto bin = binarize_mean(img, 9);
  for (int x = 0; x < 16; ++x) {
    EXPECT_EQ(bin.at(x, 8), 1);
    EXPECT_EQ(bin.at(x, 0), 0);
    EXPECT_EQ(bin.at(x, 15), 0);
  }
  // Bright pixels within reach of the line sit above their local mean.
  for (int y = 0; y < 16; ++y) {
    if (y == 8) continue;
    for (int x = 0; x < 16; ++x) EXPECT_EQ(bin.at(x, y), 0);
  }
}

TEST(BinarizeMean, StrictInequality) {
  GrayImage img(9, 9, 50.0);
  img.at(4, 4) = 10.0;
  GrayImage inverted = img;
  for (auto& p : inverted.pixels()) p = 255.0 - p;
  const auto a = binarize_mean(img, 3);
  const auto b = binarize_mean(inverted, 3);
  // Pixels equal to their local mean (far from the spot) are 0 both ways.
  EXPECT_EQ(a.at(0, 0), 0);
  EXPECT_EQ(b.at(0, 0), 0);
  EXPECT_EQ(a.at(4, 4), 1);
  EXPECT_EQ(b.at(4, 4), 0);
}

TEST(BinarizeMean, BadWindow) {
  EXPECT_THROW(binarize_mean(GrayImage(5, 5), 4), InvalidParameter);
  EXPECT_THROW(binarize_mean(GrayImage(5, 5), 1), InvalidParameter);
}

TEST(MedianDenoise, Examples) {
  BinaryImage salt(7, 7);
  salt.at(3, 3) = 1;
  EXPECT_EQ(count_foreground(median_denoise(salt, 3)), 0u);

  BinaryImage ones(6, 6, 1);
  EXPECT_EQ(median_denoise(ones, 3), ones);

  // 10x10 block in a 16x16 field: interior and edges keep their majority,
  // only the four corners (4 of 9 set) are voted out.
  BinaryImage block(16, 16);
  for (int y = 3; y < 13; ++y) {
    for (int x = 3; x < 13; ++x) block.at(x, y) = 1;
  }
  const auto out = median_denoise(block, 3);
  BinaryImage expect = block;
  for (auto [x, y] : {std::pair{3, 3}, {12, 3}, {3, 12}, {12, 12}}) expect.at(x, y) = 0;
  EXPECT_EQ(out, expect);
  EXPECT_THROW(median_denoise(block, 2), InvalidParameter);
}

TEST(DilateDisk, Examples) {
  EXPECT_EQ(count_foreground(dilate_disk(BinaryImage(5, 5), 1)), 0u);

  BinaryImage one(5, 5);
  one.at(2, 2) = 1;
  const auto plus = dilate_disk(one, 1);
  EXPECT_EQ(count_foreground(plus), 5u);
  for (auto [x, y] : {std::pair{2, 2}, {1, 2}, {3, 2}, {2, 1}, {2, 3}}) EXPECT_EQ(plus.at(x, y), 1);

  BinaryImage two(8, 5);
  two.at(2, 2) = 1;
  two.at(5, 2) = 1;  // Chebyshev gap 2: two empty columns between
  EXPECT_EQ(count_components(two), 2u);
  EXPECT_EQ(count_components(dilate_disk(two, 1)), 1u);
  EXPECT_THROW(dilate_disk(two, 0), InvalidParameter);
}

TEST(DilateDisk, ExtensiveAndMonotone) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const auto x = random_binary(20, 20, 0.1, rng);
    auto y = x;
    const auto extra = random_binary(20, 20, 0.1, rng);
    for (std::size_t i = 0; i < y.size(); ++i) y.pixels()[i] |= extra.pixels()[i];
    const auto dx = dilate_disk(x, 2);
    const auto dy = dilate_disk(y, 2);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x.pixels()[i]) {
        EXPECT_EQ(dx.pixels()[i], 1);
      }
      if (dx.pixels()[i]) {
        EXPECT_EQ(dy.pixels()[i], 1);
      }
    }
  }
}

TEST(PruneComponents, Examples) {
  BinaryImage img(20, 20);
  for (int x = 0; x < 3; ++x) img.at(x, 0) = 1;  // size 3
  for (int i = 0; i < 50; ++i) img.at(2 + i % 10, 5 + i / 10) = 1;  // size 50
  const auto out = prune_components(img, 10);
  EXPECT_EQ(count_foreground(out), 50u);
  EXPECT_EQ(out.at(0, 0), 0);
  EXPECT_EQ(prune_components(img, 1), img);

  BinaryImage diag(8, 8);
  for (int i = 0; i < 5; ++i) diag.at(i, i) = 1;
  EXPECT_EQ(prune_components(diag, 5), diag);
  EXPECT_THROW(prune_components(diag, 0), InvalidParameter);
}

TEST(PruneComponents, MatchesFloodFillOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const auto img = random_binary(32, 32, 0.15 + 0.3 * (trial % 4) / 3.0, rng);
    const int min_size = 1 + trial % 12;
    ASSERT_EQ(prune_components(img, min_size), flood_fill_filter(img, min_size)) << trial;
  }
}

TEST(LabelComponents, SizesSumToForeground) {
  std::mt19937_64 rng(5);
  const auto img = random_binary(30, 30, 0.3, rng);
  const auto cc = label_components(img);
  std::size_t total = 0;
  for (std::size_t k = 1; k < cc.sizes.size(); ++k) total += cc.sizes[k];
  EXPECT_EQ(total, count_foreground(img));
}

TEST(Pnm, PpmRoundTrip) {
  ColorImage img(5, 3);
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 5; ++x) {
      img.at(x, y) = {static_cast<std::uint8_t>(x * 40), static_cast<std::uint8_t>(y * 90),
                      static_cast<std::uint8_t>(x + y)};
    }
  }
  const auto bytes = pnm::encode_ppm(img);
  EXPECT_EQ(bytes.substr(0, 11), "P6\n5 3\n255\n");
  EXPECT_EQ(pnm::decode_ppm(bytes), img);
}

TEST(Pnm, HeaderCommentsAccepted) {
  const std::string bytes = std::string("P5\n# made by hand\n2 1\n255\n") + '\x07' + '\xff';
  const auto g = pnm::decode_pgm(bytes);
  EXPECT_EQ(g.at(0, 0), 7.0);
  EXPECT_EQ(g.at(1, 0), 255.0);
}

TEST(Pnm, BinaryWritesFullScale) {
  BinaryImage b(2, 1);
  b.at(1, 0) = 1;
  const auto g = pnm::decode_pgm(pnm::encode_pgm(b));
  EXPECT_EQ(g.at(0, 0), 0.0);
  EXPECT_EQ(g.at(1, 0), 255.0);
}

TEST(Pnm, Malformed) {
  const auto good = pnm::encode_ppm(ColorImage(4, 4, {1, 2, 3}));
  EXPECT_THROW(pnm::decode_ppm(good.substr(0, good.size() - 1)), FormatError);
  EXPECT_THROW(pnm::decode_ppm("P3\n1 1\n255\n\x01\x02\x03"), FormatError);
  EXPECT_THROW(pnm::decode_ppm("P6\n1 1\n65535\n"), FormatError);
  EXPECT_THROW(pnm::decode_pgm(good), FormatError);
  EXPECT_THROW(pnm::read_ppm("/nonexistent/file.ppm"), FormatError);
}
