#ifndef BELLLAB_MODELS_HPP
#define BELLLAB_MODELS_HPP

#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "belllab/core.hpp"
#include "belllab/rng.hpp"

namespace belllab {

// Local hidden-variable model. The station signatures are the locality
// contract: each station sees only its own direction and the hidden variable.
class LhvModel {
 public:
  virtual ~LhvModel() = default;
  virtual HiddenVariable source_sample(RandomStream& rng) const = 0;
  virtual Outcome station_a(const Direction& a, const HiddenVariable& hv) const = 0;
  virtual Outcome station_b(const Direction& b, const HiddenVariable& hv) const = 0;
  virtual std::string_view name() const = 0;
};

// X = -Y = fair coin, settings ignored, nothing ever goes undetected.
class SocksModel final : public LhvModel {
 public:
  HiddenVariable source_sample(RandomStream& rng) const override;
  Outcome station_a(const Direction& a, const HiddenVariable& hv) const override;
  Outcome station_b(const Direction& b, const HiddenVariable& hv) const override;
  std::string_view name() const override { return "socks"; }
};

using ThresholdFn = std::function<double(double)>;

// Detection threshold tau(s) = 2 / sqrt(1 + 3 s) - 1 for s in [0, 1].
// Monotone decreasing with tau(0) = 1 and tau(1) = 0. This closed form ships
// only because the quadrature oracle certifies that, with s uniform, the
// post-selected correlation it induces equals -cos(theta); see
// oracle::verify_threshold and, if certification ever fails,
// oracle::solve_threshold.
double pearle_threshold(double s);

// Detection-loophole model: hidden variable is a random point in the unit
// ball, encoded as (direction e, radial coordinate s). A station detects only
// when |e . direction| clears the threshold tau(s); otherwise it reports 0.
class PearleModel final : public LhvModel {
 public:
  PearleModel() : threshold_(pearle_threshold) {}
  explicit PearleModel(ThresholdFn threshold) : threshold_(std::move(threshold)) {}

  HiddenVariable source_sample(RandomStream& rng) const override;
  Outcome station_a(const Direction& a, const HiddenVariable& hv) const override;
  Outcome station_b(const Direction& b, const HiddenVariable& hv) const override;
  std::string_view name() const override { return "pearle"; }

  const ThresholdFn& threshold() const { return threshold_; }

 private:
  Outcome evaluate(Side side, const Direction& dir, const HiddenVariable& hv) const;
  ThresholdFn threshold_;
};

// Analytic singlet prediction E(a, b) = -a.b; the quantum reference curve.
double singlet_correlation(const Direction& a, const Direction& b);

// Lookup by CLI/config name ("pearle" or "socks"); throws on unknown names.
const LhvModel& model_by_name(std::string_view name);

}  // namespace belllab

#endif  // BELLLAB_MODELS_HPP
