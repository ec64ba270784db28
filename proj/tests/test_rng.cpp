#include <cmath>
#include <vector>

#include <doctest.h>

#include "belllab/rng.hpp"

using namespace belllab;

TEST_SUITE("rng") {

// Reference vectors for Philox-4x32-10 from the generator's original
// publication; they pin the implementation bit for bit.
TEST_CASE("philox known-answer vectors") {
  {
    const auto b = Philox4x32::encrypt(0, 0, 0, 0, 0, 0);
    CHECK(b.v[0] == 0x6627e8d5u);
    CHECK(b.v[1] == 0xe169c58du);
    CHECK(b.v[2] == 0xbc57ac4cu);
    CHECK(b.v[3] == 0x9b00dbd8u);
  }
  {
    const auto b = Philox4x32::encrypt(0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu,
                                       0xffffffffu, 0xffffffffu);
    CHECK(b.v[0] == 0x408f276du);
    CHECK(b.v[1] == 0x41c83b0eu);
    CHECK(b.v[2] == 0xa20bc7c6u);
    CHECK(b.v[3] == 0x6d5451fdu);
  }
  {
    const auto b = Philox4x32::encrypt(0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u,
                                       0xa4093822u, 0x299f31d0u);
    CHECK(b.v[0] == 0xd16cfe09u);
    CHECK(b.v[1] == 0x94fdccebu);
    CHECK(b.v[2] == 0x5001e420u);
    CHECK(b.v[3] == 0x24126ea1u);
  }
}

TEST_CASE("same key gives the same stream") {
  RandomStream a = substream(42, 1234, StreamRole::Source);
  RandomStream b = substream(42, 1234, StreamRole::Source);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct slots and roles give distinct streams") {
  RandomStream slot0 = substream(42, 0, StreamRole::Source);
  RandomStream slot1 = substream(42, 1, StreamRole::Source);
  RandomStream role1 = substream(42, 0, StreamRole::AliceCoin);
  RandomStream role2 = substream(42, 0, StreamRole::BobCoin);
  RandomStream seed2 = substream(43, 0, StreamRole::Source);
  const std::uint64_t base = substream(42, 0, StreamRole::Source).next_u64();
  CHECK(slot0.next_u64() == base);
  CHECK(slot1.next_u64() != base);
  CHECK(role1.next_u64() != base);
  CHECK(role2.next_u64() != base);
  CHECK(seed2.next_u64() != base);
}

TEST_CASE("unit draws live in [0,1) and coins in {-1,+1}") {
  RandomStream s = substream(7, 0, StreamRole::Source);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = s.next_unit();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / 100000.0 - 0.5) < 0.01);

  RandomStream c = substream(7, 1, StreamRole::AliceCoin);
  long long total = 0;
  for (int i = 0; i < 100000; ++i) {
    const int coin = c.next_coin();
    REQUIRE((coin == -1 || coin == +1));
    total += coin;
  }
  CHECK(std::abs(static_cast<double>(total)) / 100000.0 < 0.02);
}

// Empirical independence across adjacent slots: the correlation of the first
// draw of slot k with the first draw of slot k+1.
TEST_CASE("adjacent slot streams are uncorrelated") {
  constexpr int n = 100000;
  std::vector<double> first(n + 1);
  for (int k = 0; k <= n; ++k) {
    first[static_cast<std::size_t>(k)] =
        substream(99, static_cast<std::uint64_t>(k), StreamRole::Source).next_unit();
  }
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (int k = 0; k < n; ++k) {
    const double x = first[static_cast<std::size_t>(k)];
    const double y = first[static_cast<std::size_t>(k + 1)];
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
  }
  const double mx = sx / n;
  const double my = sy / n;
  const double cov = sxy / n - mx * my;
  const double vx = sxx / n - mx * mx;
  const double vy = syy / n - my * my;
  const double corr = cov / std::sqrt(vx * vy);
  CHECK(std::abs(corr) < 0.01);
}

}  // TEST_SUITE
