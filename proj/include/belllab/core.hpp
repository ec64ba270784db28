#ifndef BELLLAB_CORE_HPP
#define BELLLAB_CORE_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace belllab {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kUnitNormTolerance = 1e-12;

// sign with sign(0) fixed to +1, so station functions are total.
inline int sign_pm(double v) { return v >= 0.0 ? +1 : -1; }

struct NoDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UndefinedConditionalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProtocolFault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Side { Alice, Bob };

// One of the four (side, index) measurement-setting labels. Index is 1 or 2.
struct SettingLabel {
  Side side = Side::Alice;
  int index = 1;
};

// Unit vector in 3-space. Planar directions (z = 0) carry a meaningful
// planar_angle(); the models that only use relative angles are constructed
// through from_planar_angle.
class Direction {
 public:
  static Direction from_components(double x, double y, double z) {
    const double norm = std::sqrt(x * x + y * y + z * z);
    if (std::abs(norm - 1.0) > kUnitNormTolerance) {
      throw std::domain_error("Direction: components must form a unit vector");
    }
    return Direction(x, y, z);
  }

  static Direction from_planar_angle(double theta) {
    return Direction(std::cos(theta), std::sin(theta), 0.0);
  }

  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }

  double dot(const Direction& o) const { return x_ * o.x_ + y_ * o.y_ + z_ * o.z_; }

  double planar_angle() const { return std::atan2(y_, x_); }

  // Angle between two directions in [0, pi].
  double angle_to(const Direction& o) const {
    const double d = dot(o);
    return std::acos(d < -1.0 ? -1.0 : (d > 1.0 ? 1.0 : d));
  }

  bool operator==(const Direction& o) const = default;

 private:
  Direction(double x, double y, double z) : x_(x), y_(y), z_(z) {}
  double x_ = 1.0, y_ = 0.0, z_ = 0.0;
};

// Measurement outcome in {-1, 0, +1}; 0 means "no detection".
class Outcome {
 public:
  Outcome() = default;
  explicit Outcome(int v) : value_(v) {
    if (v < -1 || v > +1) {
      throw std::domain_error("Outcome: value must be -1, 0 or +1");
    }
  }
  int value() const { return value_; }
  bool detected() const { return value_ != 0; }
  bool operator==(const Outcome& o) const = default;

 private:
  int value_ = 0;
};

// The four counterfactual outcomes (x1, x2, y1, y2): what each station would
// output under either of its settings. Only used by the enumeration oracle;
// simulated runs observe a single (x_A, y_B) selection per slot.
struct CounterfactualQuadruple {
  int x1 = 0, x2 = 0, y1 = 0, y2 = 0;
};

// Hidden variable emitted by the source, per model.
struct PearleHidden {
  Direction e = Direction::from_planar_angle(0.0);  // uniform on the unit sphere
  double s = 0.0;                                   // radial coordinate in [0, 1]
};

struct SocksHidden {
  int coin = +1;  // fair coin, -1 or +1
};

using HiddenVariable = std::variant<PearleHidden, SocksHidden>;

// Pair of setting indices (Alice, Bob), each 1 or 2.
struct SettingPair {
  int a = 1;
  int b = 1;
  int flat() const { return (a - 1) * 2 + (b - 1); }
  bool operator==(const SettingPair& o) const = default;
};

inline constexpr std::array<SettingPair, 4> kAllPairs = {
    SettingPair{1, 1}, SettingPair{1, 2}, SettingPair{2, 1}, SettingPair{2, 2}};

// One time slot. Every slot yields a record, detected or not.
struct TrialRecord {
  std::uint64_t slot = 0;
  SettingPair pair;
  Direction alice_direction = Direction::from_planar_angle(0.0);
  Direction bob_direction = Direction::from_planar_angle(0.0);
  Outcome outcome_a;
  Outcome outcome_b;
  std::optional<HiddenVariable> hidden;  // retained only when tracing is on
};

struct TallyCell {
  std::uint64_t n_slots = 0;
  std::uint64_t n_detected_pairs = 0;       // the per-pair "good" count
  std::int64_t sum_product_all = 0;         // sum X*Y over all slots (zeros included)
  std::int64_t sum_product_detected = 0;    // sum X*Y over slots with X != 0 and Y != 0
  std::uint64_t n_detected_a = 0;
  std::uint64_t n_detected_b = 0;

  bool operator==(const TallyCell& o) const = default;
};

// Per-setting-pair counts and product sums. Integer-valued, so accumulation
// order cannot change the result; merge is componentwise addition.
class Tally {
 public:
  Tally() = default;
  Tally(const std::array<Direction, 2>& alice, const std::array<Direction, 2>& bob)
      : directions_(Directions{alice, bob}) {}

  void add(SettingPair pair, Outcome a, Outcome b) {
    TallyCell& c = cells_[static_cast<std::size_t>(pair.flat())];
    const int prod = a.value() * b.value();
    c.n_slots += 1;
    c.sum_product_all += prod;
    if (a.detected()) c.n_detected_a += 1;
    if (b.detected()) c.n_detected_b += 1;
    if (a.detected() && b.detected()) {
      c.n_detected_pairs += 1;
      c.sum_product_detected += prod;
    }
  }

  const TallyCell& cell(SettingPair pair) const {
    return cells_[static_cast<std::size_t>(pair.flat())];
  }

  std::uint64_t total_slots() const {
    std::uint64_t m = 0;
    for (const auto& c : cells_) m += c.n_slots;
    return m;
  }

  std::uint64_t total_detected() const {
    std::uint64_t n = 0;
    for (const auto& c : cells_) n += c.n_detected_pairs;
    return n;
  }

  bool has_directions() const { return directions_.has_value(); }
  const Direction& alice_direction(int index) const { return dirs().alice.at(index - 1); }
  const Direction& bob_direction(int index) const { return dirs().bob.at(index - 1); }

  bool operator==(const Tally& o) const {
    return cells_ == o.cells_ && same_key_space(o);
  }

  friend Tally merge(const Tally& t1, const Tally& t2);

 private:
  struct Directions {
    std::array<Direction, 2> alice;
    std::array<Direction, 2> bob;
    bool operator==(const Directions& o) const = default;
  };

  const Directions& dirs() const {
    if (!directions_) throw std::logic_error("Tally: no setting directions attached");
    return *directions_;
  }

  bool same_key_space(const Tally& o) const {
    if (!directions_ || !o.directions_) return true;  // empty tally matches anything
    return *directions_ == *o.directions_;
  }

  std::array<TallyCell, 4> cells_{};
  std::optional<Directions> directions_;
};

inline Tally merge(const Tally& t1, const Tally& t2) {
  if (!t1.same_key_space(t2)) {
    throw std::invalid_argument("merge: tallies use different setting-pair key spaces");
  }
  Tally out;
  out.directions_ = t1.directions_ ? t1.directions_ : t2.directions_;
  for (std::size_t k = 0; k < 4; ++k) {
    TallyCell& c = out.cells_[k];
    const TallyCell& a = t1.cells_[k];
    const TallyCell& b = t2.cells_[k];
    c.n_slots = a.n_slots + b.n_slots;
    c.n_detected_pairs = a.n_detected_pairs + b.n_detected_pairs;
    c.sum_product_all = a.sum_product_all + b.sum_product_all;
    c.sum_product_detected = a.sum_product_detected + b.sum_product_detected;
    c.n_detected_a = a.n_detected_a + b.n_detected_a;
    c.n_detected_b = a.n_detected_b + b.n_detected_b;
  }
  return out;
}

// One of the eight odd-negative sign patterns (s1, s2, s3, s4).
struct SignPattern {
  std::array<int, 4> s{+1, -1, -1, -1};
};

// All 8 patterns with an odd number of -1 entries, in a fixed order.
std::array<SignPattern, 8> odd_sign_patterns();

struct ChshEntry {
  SignPattern pattern;
  double statistic = 0.0;
  double standard_error = 0.0;
  bool violation = false;  // statistic > 2 + k_sigma * standard_error
};

struct ChshReport {
  std::array<ChshEntry, 8> entries;
  double k_sigma = 5.0;
  std::string ensemble;  // "full" or "postselected"

  const ChshEntry& max_entry() const {
    const ChshEntry* best = &entries[0];
    for (const auto& e : entries) {
      if (e.statistic > best->statistic) best = &e;
    }
    return *best;
  }
  bool any_violation() const {
    for (const auto& e : entries) {
      if (e.violation) return true;
    }
    return false;
  }
};

}  // namespace belllab

#endif  // BELLLAB_CORE_HPP
