#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "censfit/rng.hpp"

#include <cmath>
#include <set>

using namespace censfit;

TEST_CASE("philox4x32-10 known-answer vectors") {
  // Published Random123 vectors plus points frozen from an independent
  // Python reimplementation of the round function.
  using A4 = std::array<std::uint32_t, 4>;
  using A2 = std::array<std::uint32_t, 2>;
  CHECK(Philox4x32::block(A4{0, 0, 0, 0}, A2{0, 0}) ==
        A4{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Philox4x32::block(A4{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                          A2{0xffffffffu, 0xffffffffu}) ==
        A4{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Philox4x32::block(A4{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                          A2{0xa4093822u, 0x299f31d0u}) ==
        A4{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
  CHECK(Philox4x32::block(A4{1, 0, 0, 0}, A2{0, 0}) ==
        A4{0xf8e4cca4u, 0x5cb200dbu, 0xb1a574ebu, 0x097eff67u});
  CHECK(Philox4x32::block(A4{0, 0, 1, 0}, A2{0, 0}) ==
        A4{0x844515e1u, 0xf08d6eaau, 0x0f19c053u, 0x83f875f0u});
  CHECK(Philox4x32::block(A4{7, 9, 13, 21}, A2{0xdeadbeefu, 0xcafef00du}) ==
        A4{0x3d7871dfu, 0x6b202970u, 0xc8eb16c3u, 0xd005e984u});
}

TEST_CASE("streams are deterministic and independent of construction order") {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform01() == b.uniform01());

  RngStream c(42, 8);
  c.uniform01();  // advancing another stream cannot affect stream 7
  RngStream a2(42, 7);
  RngStream b2(42, 7);
  b2.normal();
  (void)a2;
  RngStream fresh(42, 7);
  RngStream moved(42, 7);
  for (int i = 0; i < 10; ++i) CHECK(fresh.uniform01() == moved.uniform01());
}

TEST_CASE("distinct seeds and streams give distinct sequences") {
  RngStream a(1, 0), b(2, 0), c(1, 1);
  std::set<double> firsts;
  firsts.insert(a.uniform01());
  firsts.insert(b.uniform01());
  firsts.insert(c.uniform01());
  CHECK(firsts.size() == 3);
}

TEST_CASE("uniform01 lies strictly inside (0,1) with sane moments") {
  RngStream rng(987654321, 3);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    sum += u;
    sumsq += u * u;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.005));
  CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.01));
}

TEST_CASE("normal draws have standard moments") {
  RngStream rng(555, 0);
  const int n = 200000;
  double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s1 += z;
    s2 += z * z;
    s3 += z * z * z;
    s4 += z * z * z * z;
  }
  CHECK(s1 / n == doctest::Approx(0.0).epsilon(1).scale(0.01));
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(s3 / n == doctest::Approx(0.0).epsilon(1).scale(0.05));
  CHECK(s4 / n == doctest::Approx(3.0).epsilon(0.05));
}
