#include <doctest.h>

#include "semnav/core/binio.hpp"
#include "semnav/core/geometry.hpp"
#include "semnav/core/grid.hpp"
#include "semnav/core/morphology.hpp"
#include "semnav/core/rng.hpp"

using namespace semnav;

TEST_CASE("wrap_angle lands in (-pi, pi]") {
  CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(3 * kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(0.5) == doctest::Approx(0.5));
  CHECK(wrap_angle(2 * kPi + 0.25) == doctest::Approx(0.25));
  for (double a = -20.0; a < 20.0; a += 0.173) {
    double w = wrap_angle(a);
    CHECK(w > -kPi - 1e-12);
    CHECK(w <= kPi + 1e-12);
    CHECK(std::abs(std::remainder(w - a, 2 * kPi)) < 1e-9);
  }
}

TEST_CASE("rect distance") {
  Rect r{1, 1, 3, 2};
  CHECK(r.distance_to({2, 1.5}) == 0.0);
  CHECK(r.distance_to({0, 1.5}) == doctest::Approx(1.0));
  CHECK(r.distance_to({4, 3}) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("rng determinism and stream independence") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c = Rng::derive(42, {1, 2});
  Rng d = Rng::derive(42, {1, 3});
  CHECK(c.next_u64() != d.next_u64());
}

TEST_CASE("rng uniform_int bounds") {
  Rng r(7);
  for (int i = 0; i < 10000; ++i) {
    int v = r.uniform_int(3, 9);
    CHECK(v >= 3);
    CHECK(v <= 9);
  }
}

TEST_CASE("rng gaussian moments") {
  Rng r(11);
  double sum = 0, sq = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    double v = r.gaussian(2.0);
    sum += v;
    sq += v * v;
  }
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(std::sqrt(sq / n) == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("disk offsets radius 3 has 29 cells") {
  CHECK(disk_offsets(3.0).size() == 29);
  CHECK(disk_offsets(0.0).size() == 1);
}

TEST_CASE("morphology opening removes speck, closing fills pinhole") {
  Grid2D<uint8_t> g(9, 9, 0);
  g.at(4, 4) = 1;
  auto opened = morph_open(g, 1.0);
  for (size_t i = 0; i < opened.size(); ++i) CHECK(opened[i] == 0);

  Grid2D<uint8_t> block(9, 9, 0);
  for (int y = 2; y < 7; ++y)
    for (int x = 2; x < 7; ++x) block.at(x, y) = 1;
  block.at(4, 4) = 0;  // pinhole
  auto closed = morph_close(block, 1.0);
  CHECK(closed.at(4, 4) == 1);
}

TEST_CASE("morphology open/close idempotent") {
  Rng r(3);
  Grid2D<uint8_t> g(24, 24, 0);
  for (size_t i = 0; i < g.size(); ++i) g[i] = r.bernoulli(0.4) ? 1 : 0;
  auto once = morph_open(morph_close(g, 1.0), 1.0);
  auto twice = morph_open(morph_close(once, 1.0), 1.0);
  CHECK(once == twice);
}

TEST_CASE("binio roundtrip and truncation") {
  BinWriter w;
  w.magic("SMAP");
  w.u16(480);
  w.f32(1.5f);
  BinReader r(w.buffer());
  r.expect_magic("SMAP");
  CHECK(r.u16() == 480);
  CHECK(r.f32() == 1.5f);
  CHECK(r.remaining() == 0);

  auto truncated = w.buffer();
  truncated.pop_back();
  BinReader r2(std::move(truncated));
  r2.expect_magic("SMAP");
  r2.u16();
  CHECK_THROWS_AS(r2.f32(), ParseError);
}
