#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "support.hpp"
#include "ugir/core/config.hpp"
#include "ugir/core/distance_transform.hpp"
#include "ugir/core/scribbles.hpp"
#include "ugir/core/ugstack.hpp"

using namespace ugir;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("ugir_core_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Stack ramp_stack(Shape3 shape) {
  Stack s;
  s.data = Volume<float>(shape);
  for (std::size_t i = 0; i < s.data.size(); ++i) s.data.values()[i] = 0.25f * static_cast<float>(i);
  s.spacing = {2.5, 0.5, 0.75};
  return s;
}

}  // namespace

TEST_SUITE("core") {
  TEST_CASE("stack container sizes and round trip") {
    const auto dir = scratch_dir("stack");
    const Stack s = ramp_stack({3, 4, 5});
    write_stack(s, dir / "img");
    CHECK(fs::file_size(dir / "img.raw") == 240);
    const auto header = nlohmann::json::parse(slurp(dir / "img.json"));
    CHECK(header["magic"] == "UGSTACK1");
    CHECK(header["kind"] == "stack");
    CHECK(header["dims"] == nlohmann::json({3, 4, 5}));
    CHECK(header["dtype"] == "f32");

    const Stack back = read_stack(dir / "img.json");
    CHECK(back.shape() == Shape3{3, 4, 5});
    CHECK(back.data == s.data);
    CHECK(back.spacing == s.spacing);

    write_stack(back, dir / "again");
    CHECK(slurp(dir / "again.raw") == slurp(dir / "img.raw"));
  }

  TEST_CASE("round trip is bit exact for random finite values") {
    SplitMix64 rng(3);
    const auto dir = scratch_dir("random");
    Stack s;
    s.data = Volume<float>({2, 7, 3});
    for (auto& v : s.data.values()) v = static_cast<float>(rng.normal() * 1e6);
    s.data.values()[0] = -0.0f;
    s.data.values()[1] = std::numeric_limits<float>::denorm_min();
    write_stack(s, dir / "x");
    const auto back = read_stack(dir / "x");
    CHECK(std::memcmp(back.data.values().data(), s.data.values().data(), s.data.size() * sizeof(float)) == 0);
  }

  TEST_CASE("truncated payload is rejected") {
    const auto dir = scratch_dir("trunc");
    write_stack(ramp_stack({3, 4, 5}), dir / "img");
    fs::resize_file(dir / "img.raw", 239);
    CHECK_THROWS_WITH_AS(read_stack(dir / "img"), doctest::Contains("payload size mismatch"), IoError);
  }

  TEST_CASE("missing files and non-finite values are rejected") {
    const auto dir = scratch_dir("bad");
    CHECK_THROWS_WITH_AS(read_stack(dir / "nothing"), doctest::Contains("missing file"), IoError);
    Stack s = ramp_stack({1, 2, 2});
    s.data.values()[2] = std::numeric_limits<float>::quiet_NaN();
    RawArray raw;
    raw.header = {ArrayKind::stack, {1, 2, 2}, DType::f32, {1, 1, 1}, {}};
    append_f32_le(raw.bytes, s.data.values());
    write_raw(raw, dir / "nan");
    CHECK_THROWS_AS(read_stack(dir / "nan"), IoError);
  }

  TEST_CASE("probability group and mask payload sizes") {
    const auto dir = scratch_dir("sizes");
    SplitMix64 rng(1);
    ProbabilityGroup g(testing::random_members(rng, 4, {3, 4, 5}));
    write_probability_group(g, {1, 1, 1}, dir / "probs");
    CHECK(fs::file_size(dir / "probs.raw") == 960);
    const auto back = read_probability_group(dir / "probs");
    REQUIRE(back.size() == 4);
    for (int n = 0; n < 4; ++n) CHECK(back.member(n) == g.member(n));

    BinaryMask m({3, 4, 5});
    m(1, 2, 3) = 1;
    write_mask(m, {1, 1, 1}, dir / "mask");
    CHECK(fs::file_size(dir / "mask.raw") == 60);
    CHECK(read_mask(dir / "mask.raw") == m);
  }

  TEST_CASE("decoders check the container kind") {
    const RawArray a = encode(ramp_stack({1, 2, 2}));
    CHECK_THROWS_AS(decode_mask(a), IoError);
    CHECK_THROWS_AS(decode_probability_group(a), IoError);
  }

  TEST_CASE("normalized slice spans the unit interval") {
    Stack s = ramp_stack({2, 3, 3});
    for (auto& v : s.data.slice_values(1)) v = 7.0f;
    const auto a = normalized_slice(s, 0);
    CHECK(*std::min_element(a.values().begin(), a.values().end()) == 0.0);
    CHECK(*std::max_element(a.values().begin(), a.values().end()) == 1.0);
    const auto b = normalized_slice(s, 1);
    for (double v : b.values()) CHECK(v == 0.0);
  }

  TEST_CASE("rasterize single point") {
    ScribbleSet s{0, {{ScribbleLabel::foreground, {{3, 4}}, 0}}};
    const auto seeds = rasterize_scribbles(s, 8, 8);
    CHECK(seeds.foreground_pixels() == std::vector<Pixel>{{3, 4}});
    CHECK_FALSE(seeds.has_background());
  }

  TEST_CASE("rasterize horizontal line") {
    ScribbleSet s{0, {{ScribbleLabel::foreground, {{2, 2}, {2, 6}}, 0}}};
    const auto f = rasterize_scribbles(s, 8, 8).foreground_pixels();
    CHECK(f == std::vector<Pixel>{{2, 2}, {2, 3}, {2, 4}, {2, 5}, {2, 6}});
  }

  TEST_CASE("later stroke wins") {
    ScribbleSet s{0,
                  {{ScribbleLabel::foreground, {{4, 4}}, 1}, {ScribbleLabel::background, {{4, 4}}, 0}}};
    const auto seeds = rasterize_scribbles(s, 8, 8);
    CHECK(seeds.background(4, 4) == 1);
    CHECK(seeds.foreground(4, 4) == 0);
    CHECK(seeds.foreground_pixels().size() == 4);
  }

  TEST_CASE("out-of-bounds point rejects the whole set") {
    ScribbleSet s{0, {{ScribbleLabel::foreground, {{1, 1}}, 0}, {ScribbleLabel::background, {{1, 8}}, 0}}};
    CHECK_THROWS_AS(rasterize_scribbles(s, 8, 8), InvalidInput);
  }

  TEST_CASE("random strokes: disjoint seeds within radius + 0.5 of the polyline") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const int rows = 20, cols = 24;
      ScribbleSet s;
      const int strokes = 1 + rng.below(4);
      for (int i = 0; i < strokes; ++i) {
        Stroke st;
        st.label = rng.below(2) ? ScribbleLabel::foreground : ScribbleLabel::background;
        st.radius = rng.below(4);
        const int pts = 1 + rng.below(4);
        for (int p = 0; p < pts; ++p) st.polyline.push_back({rng.below(rows), rng.below(cols)});
        s.strokes.push_back(st);
      }
      const auto seeds = rasterize_scribbles(s, rows, cols);
      for (std::size_t i = 0; i < seeds.foreground.size(); ++i) CHECK_FALSE((seeds.foreground[i] && seeds.background[i]));

      // Distance from each seed pixel to the nearest segment, any stroke.
      auto seg_dist = [](double pr, double pc, Pixel a, Pixel b) {
        const double vr = b.row - a.row, vc = b.col - a.col;
        const double len2 = vr * vr + vc * vc;
        double t = len2 > 0 ? ((pr - a.row) * vr + (pc - a.col) * vc) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        return std::hypot(pr - (a.row + t * vr), pc - (a.col + t * vc));
      };
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
          if (!seeds.foreground(r, c) && !seeds.background(r, c)) continue;
          bool near = false;
          for (const auto& st : s.strokes) {
            for (std::size_t p = 0; p < st.polyline.size(); ++p) {
              const Pixel a = st.polyline[p], b = st.polyline[std::min(p + 1, st.polyline.size() - 1)];
              near = near || seg_dist(r, c, a, b) <= st.radius + 0.5 + 1e-9;
            }
          }
          CHECK(near);
        }
      }
    }
  }

  TEST_CASE("scribble JSON round trip") {
    const auto j = nlohmann::json::parse(
        R"({"slice": 3, "strokes": [{"label": "fg", "polyline": [[1, 2], [3, 4]], "radius": 2},
                                     {"label": "bg", "polyline": [[5, 5]], "radius": 0}]})");
    const auto s = j.get<ScribbleSet>();
    CHECK(s.slice_index == 3);
    REQUIRE(s.strokes.size() == 2);
    CHECK(s.strokes[0].label == ScribbleLabel::foreground);
    CHECK(s.strokes[0].polyline[1] == Pixel{3, 4});
    CHECK(s.strokes[1].label == ScribbleLabel::background);
    CHECK(nlohmann::json(s).get<ScribbleSet>() == s);
    CHECK_THROWS_AS(nlohmann::json::parse(R"({"slice":0,"strokes":[{"label":"x","polyline":[],"radius":0}]})")
                        .get<ScribbleSet>(),
                    InvalidInput);
  }

  TEST_CASE("distance transform matches brute force") {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      const auto m = testing::random_mask(rng, 13, 17, 0.05);
      if (testing::count(m) == 0) continue;
      const auto fast = distance_transform(m);
      const auto slow = testing::brute_edt(m);
      for (std::size_t i = 0; i < m.size(); ++i) CHECK(fast[i] == doctest::Approx(slow[i]).epsilon(1e-12));
    }
  }

  TEST_CASE("anisotropic distance transform") {
    MaskImage m(5, 5);
    m(2, 2) = 1;
    const auto d = distance_transform(m, 2.0, 0.5);
    CHECK(d(0, 2) == doctest::Approx(4.0));
    CHECK(d(2, 0) == doctest::Approx(1.0));
    CHECK(d(0, 0) == doctest::Approx(std::sqrt(17.0)));
  }

  TEST_CASE("signed distance of a disk") {
    const auto m = testing::disk(41, 41, 20, 20, 10);
    const auto phi = signed_distance(m);
    CHECK(std::abs(phi(20, 20) - 10.0) <= 0.5);
    CHECK(phi(20, 31) == doctest::Approx(-0.5));
    CHECK(phi(20, 30) == doctest::Approx(0.5));
    CHECK(phi(20, 33) == doctest::Approx(-2.5));
    for (std::size_t i = 0; i < m.size(); ++i) CHECK((phi[i] > 0) == (m[i] != 0));
    const auto empty = signed_distance(MaskImage(4, 4));
    for (double v : empty.values()) CHECK(v < 0);
  }

  TEST_CASE("config JSON mirrors field names and validates") {
    RefineConfig c;
    const nlohmann::json j = c;
    for (const char* key : {"alpha", "beta", "lambda", "mu", "D", "epsilon", "dt", "max_steps", "zeta",
                            "m_prime_fraction", "early_stop_count", "gamma", "threshold"})
      CHECK(j.contains(key));
    CHECK(j.get<RefineConfig>() == c);
    CHECK(nlohmann::json::parse(R"({"alpha": 0.2})").get<RefineConfig>().alpha == 0.2);
    CHECK_THROWS_AS(nlohmann::json::parse(R"({"alpah": 0.2})").get<RefineConfig>(), InvalidInput);
    RefineConfig bad;
    bad.mu = 0.3;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    bad = {};
    bad.threshold = 1.0;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    bad = {};
    bad.D = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
  }
}
