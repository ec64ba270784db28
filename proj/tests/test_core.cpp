#include <algorithm>
#include <set>

#include <doctest.h>

#include "belllab/core.hpp"
#include "belllab/rng.hpp"

using namespace belllab;

namespace {

// Random but structurally valid tally for the merge property tests.
Tally random_tally(std::uint64_t seed, std::uint64_t slots) {
  const std::array<Direction, 2> alice{Direction::from_planar_angle(0.0),
                                       Direction::from_planar_angle(kPi / 2)};
  const std::array<Direction, 2> bob{Direction::from_planar_angle(kPi / 4),
                                     Direction::from_planar_angle(3 * kPi / 4)};
  Tally t(alice, bob);
  RandomStream rng = substream(seed, 0, StreamRole::Source);
  for (std::uint64_t i = 0; i < slots; ++i) {
    const SettingPair pair{rng.next_coin() > 0 ? 2 : 1, rng.next_coin() > 0 ? 2 : 1};
    const int a = static_cast<int>(rng.next_u64() % 3) - 1;
    const int b = static_cast<int>(rng.next_u64() % 3) - 1;
    t.add(pair, Outcome(a), Outcome(b));
  }
  return t;
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("direction validates unit norm") {
  CHECK_NOTHROW(Direction::from_components(1.0, 0.0, 0.0));
  CHECK_NOTHROW(Direction::from_components(0.6, 0.8, 0.0));
  CHECK_THROWS_AS(Direction::from_components(1.0, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(Direction::from_components(0.0, 0.0, 0.0), std::domain_error);

  const Direction d = Direction::from_planar_angle(0.7);
  CHECK(d.planar_angle() == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(d.z() == 0.0);

  const Direction a = Direction::from_planar_angle(0.0);
  const Direction b = Direction::from_planar_angle(kPi / 3);
  CHECK(a.angle_to(b) == doctest::Approx(kPi / 3).epsilon(1e-12));
}

TEST_CASE("outcome domain is closed") {
  CHECK(Outcome(-1).value() == -1);
  CHECK(Outcome(0).value() == 0);
  CHECK(Outcome(+1).value() == +1);
  CHECK(!Outcome(0).detected());
  CHECK(Outcome(1).detected());
  CHECK_THROWS_AS(Outcome(2), std::domain_error);
  CHECK_THROWS_AS(Outcome(-2), std::domain_error);
}

TEST_CASE("sign convention fixes sign(0) = +1") {
  CHECK(sign_pm(0.0) == +1);
  CHECK(sign_pm(-0.0) == +1);
  CHECK(sign_pm(1e-300) == +1);
  CHECK(sign_pm(-1e-300) == -1);
}

TEST_CASE("merge identities") {
  const Tally empty;
  CHECK(merge(empty, empty) == empty);

  const Tally t = random_tally(5, 1000);
  CHECK(merge(t, empty) == t);
  CHECK(merge(empty, t) == t);
}

TEST_CASE("merge adds componentwise") {
  const std::array<Direction, 2> alice{Direction::from_planar_angle(0.0),
                                       Direction::from_planar_angle(kPi / 2)};
  const std::array<Direction, 2> bob{Direction::from_planar_angle(kPi / 4),
                                     Direction::from_planar_angle(3 * kPi / 4)};
  Tally t1(alice, bob);
  Tally t2(alice, bob);
  for (int i = 0; i < 500; ++i) {
    t1.add(SettingPair{1, 1}, Outcome(-1), Outcome(1));
    t2.add(SettingPair{1, 1}, Outcome(1), Outcome(1));
  }
  const Tally sum = merge(t1, t2);
  CHECK(sum.cell(SettingPair{1, 1}).n_slots == 1000);
  CHECK(sum.cell(SettingPair{1, 1}).sum_product_all == 0);
  CHECK(sum.cell(SettingPair{1, 1}).n_detected_pairs == 1000);
}

TEST_CASE("merge is associative and commutative") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Tally t1 = random_tally(seed * 3 + 0, 200);
    const Tally t2 = random_tally(seed * 3 + 1, 200);
    const Tally t3 = random_tally(seed * 3 + 2, 200);
    CHECK(merge(t1, t2) == merge(t2, t1));
    CHECK(merge(merge(t1, t2), t3) == merge(t1, merge(t2, t3)));
  }
}

TEST_CASE("merge rejects mismatched key spaces") {
  const std::array<Direction, 2> alice{Direction::from_planar_angle(0.0),
                                       Direction::from_planar_angle(kPi / 2)};
  const std::array<Direction, 2> bob1{Direction::from_planar_angle(kPi / 4),
                                      Direction::from_planar_angle(3 * kPi / 4)};
  const std::array<Direction, 2> bob2{Direction::from_planar_angle(0.1),
                                      Direction::from_planar_angle(0.2)};
  const Tally t1(alice, bob1);
  const Tally t2(alice, bob2);
  CHECK_THROWS_AS(merge(t1, t2), std::invalid_argument);
}

TEST_CASE("tally count invariants hold on random data") {
  for (std::uint64_t seed = 100; seed < 105; ++seed) {
    const Tally t = random_tally(seed, 2000);
    for (const SettingPair pair : kAllPairs) {
      const TallyCell& c = t.cell(pair);
      CHECK(c.n_detected_pairs <= std::min(c.n_detected_a, c.n_detected_b));
      CHECK(std::min(c.n_detected_a, c.n_detected_b) <= c.n_slots);
      CHECK(static_cast<std::uint64_t>(std::abs(c.sum_product_detected)) <=
            c.n_detected_pairs);
      CHECK(static_cast<std::uint64_t>(std::abs(c.sum_product_all)) <= c.n_slots);
    }
  }
}

TEST_CASE("exactly eight odd sign patterns, all distinct") {
  const auto patterns = odd_sign_patterns();
  std::set<std::array<int, 4>> seen;
  for (const auto& p : patterns) {
    int negatives = 0;
    for (int s : p.s) {
      CHECK((s == -1 || s == +1));
      if (s == -1) ++negatives;
    }
    CHECK(negatives % 2 == 1);
    seen.insert(p.s);
  }
  CHECK(seen.size() == 8);
}

}  // TEST_SUITE
