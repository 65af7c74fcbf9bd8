#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "ugir/geodesic/geodesic.hpp"

using namespace ugir;

namespace {

ImageD random_image(SplitMix64& rng, int rows, int cols) {
  ImageD img(rows, cols);
  for (auto& v : img.values()) v = rng.uniform();
  return img;
}

MaskImage random_seeds(SplitMix64& rng, int rows, int cols) {
  MaskImage s(rows, cols);
  const int n = 1 + rng.below(4);
  for (int i = 0; i < n; ++i) s(rng.below(rows), rng.below(cols)) = 1;
  return s;
}

}  // namespace

TEST_SUITE("geodesic") {
  TEST_CASE("constant image gives the 8-connected chamfer distance") {
    ImageD img(8, 8, 0.4);
    MaskImage seeds(8, 8);
    seeds(0, 0) = 1;
    const auto d = geodesic_distance(img, seeds, 1.0).values;
    CHECK(d(3, 4) == doctest::Approx(3 * std::sqrt(2.0) + 1).epsilon(1e-12));
    CHECK(d(0, 0) == 0.0);
    for (int r = 0; r < 8; ++r)
      for (int c = 0; c < 8; ++c) CHECK(std::abs(d(r, c) - testing::octile(r, c)) <= 1e-12);
  }

  TEST_CASE("gamma 0 ignores intensity") {
    SplitMix64 rng(1);
    const auto img = random_image(rng, 12, 9);
    MaskImage seeds(12, 9);
    seeds(5, 4) = 1;
    const auto d = geodesic_distance(img, seeds, 0.0).values;
    for (int r = 0; r < 12; ++r)
      for (int c = 0; c < 9; ++c) CHECK(std::abs(d(r, c) - testing::octile(r - 5, c - 4)) <= 1e-12);
  }

  TEST_CASE("matches exhaustive relaxation on random images") {
    SplitMix64 rng(2);
    for (int trial = 0; trial < 12; ++trial) {
      const double gamma = trial % 3 == 0 ? 0.0 : (trial % 3 == 1 ? 1.0 : 5.0);
      const auto img = random_image(rng, 16, 16);
      const auto seeds = random_seeds(rng, 16, 16);
      const auto fast = geodesic_distance(img, seeds, gamma).values;
      const auto slow = testing::relaxation_geodesic(img, seeds, gamma);
      double err = 0;
      for (std::size_t i = 0; i < fast.size(); ++i) err = std::max(err, std::abs(fast[i] - slow[i]));
      CHECK(err <= 1e-6);
    }
  }

  TEST_CASE("seeds are zero, no single step improves a distance, more seeds never hurt") {
    SplitMix64 rng(3);
    const auto img = random_image(rng, 14, 14);
    auto seeds = random_seeds(rng, 14, 14);
    const auto d = geodesic_distance(img, seeds, 1.0).values;
    for (int r = 0; r < 14; ++r) {
      for (int c = 0; c < 14; ++c) {
        if (seeds(r, c)) CHECK(d(r, c) == 0.0);
        for (int dr = -1; dr <= 1; ++dr)
          for (int dc = -1; dc <= 1; ++dc) {
            if (!img.contains(r + dr, c + dc) || (dr == 0 && dc == 0)) continue;
            const double di = img(r, c) - img(r + dr, c + dc);
            CHECK(d(r, c) <= d(r + dr, c + dc) + std::sqrt(dr * dr + dc * dc + di * di) + 1e-12);
          }
      }
    }
    seeds(rng.below(14), rng.below(14)) = 1;
    const auto d2 = geodesic_distance(img, seeds, 1.0).values;
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(d2[i] <= d[i]);
  }

  TEST_CASE("empty seed set is an error") {
    CHECK_THROWS_AS(geodesic_distance(ImageD(4, 4), MaskImage(4, 4), 1.0), InvalidInput);
  }

  TEST_CASE("likelihood examples") {
    const auto both_empty = interaction_likelihood(std::nullopt, std::nullopt, 4.0, 5, 6);
    for (double e : both_empty.eta.values()) CHECK(e == 0.5);

    DistanceMap on_fg{ImageD(1, 1, 0.0)};
    const auto eta = interaction_likelihood(on_fg, std::nullopt, 4.0, 1, 1);
    CHECK(eta.eta[0] == doctest::Approx(1.0 / (1.0 + std::exp(-4.0))).epsilon(1e-12));
    CHECK(eta.eta[0] == doctest::Approx(0.9820).epsilon(1e-4));
  }

  TEST_CASE("likelihood matches the formula, is bounded and flips under F/B swap") {
    SplitMix64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
      const double D = rng.uniform(0.5, 8.0);
      DistanceMap f{ImageD(6, 7)}, b{ImageD(6, 7)};
      for (auto& v : f.values.values()) v = rng.uniform(0, 10);
      for (auto& v : b.values.values()) v = rng.uniform(0, 10);
      const auto eta = interaction_likelihood(f, b, D, 6, 7).eta;
      const auto swapped = interaction_likelihood(b, f, D, 6, 7).eta;
      const double lo = 1 / (1 + std::exp(D)), hi = std::exp(D) / (1 + std::exp(D));
      for (std::size_t i = 0; i < eta.size(); ++i) {
        CHECK(eta[i] == doctest::Approx(testing::eta_formula(f.values[i], b.values[i], D)).epsilon(1e-12));
        CHECK(eta[i] >= lo - 1e-15);
        CHECK(eta[i] <= hi + 1e-15);
        CHECK(std::abs(swapped[i] - (1 - eta[i])) <= 1e-12);
      }
    }
  }

  TEST_CASE("likelihood from seeds") {
    SplitMix64 rng(5);
    const auto img = random_image(rng, 10, 10);
    SeedMasks seeds{MaskImage(10, 10), MaskImage(10, 10)};
    seeds.foreground(2, 2) = 1;
    const auto only_f = likelihood_from_seeds(img, seeds, 1.0, 4.0).eta;
    CHECK(only_f(2, 2) == doctest::Approx(1.0 / (1.0 + std::exp(-4.0))));
    for (double e : only_f.values()) CHECK(e >= 0.5);
    seeds.background(8, 8) = 1;
    const auto both = likelihood_from_seeds(img, seeds, 1.0, 4.0).eta;
    std::swap(seeds.foreground, seeds.background);
    const auto flipped = likelihood_from_seeds(img, seeds, 1.0, 4.0).eta;
    for (std::size_t i = 0; i < both.size(); ++i) CHECK(std::abs(flipped[i] - (1 - both[i])) <= 1e-12);
  }
}
