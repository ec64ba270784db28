#include "belllab/models.hpp"

#include <cmath>
#include <stdexcept>

namespace belllab {

namespace {

const SocksHidden& as_socks(const HiddenVariable& hv) {
  if (const auto* h = std::get_if<SocksHidden>(&hv)) return *h;
  throw std::invalid_argument("socks station: hidden variable is not a Socks draw");
}

const PearleHidden& as_pearle(const HiddenVariable& hv) {
  if (const auto* h = std::get_if<PearleHidden>(&hv)) return *h;
  throw std::invalid_argument("pearle station: hidden variable is not a Pearle draw");
}

}  // namespace

HiddenVariable SocksModel::source_sample(RandomStream& rng) const {
  return SocksHidden{rng.next_coin()};
}

Outcome SocksModel::station_a(const Direction&, const HiddenVariable& hv) const {
  return Outcome(as_socks(hv).coin);
}

Outcome SocksModel::station_b(const Direction&, const HiddenVariable& hv) const {
  return Outcome(-as_socks(hv).coin);
}

double pearle_threshold(double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw std::domain_error("pearle_threshold: s must lie in [0, 1]");
  }
  return 2.0 / std::sqrt(1.0 + 3.0 * s) - 1.0;
}

HiddenVariable PearleModel::source_sample(RandomStream& rng) const {
  // Inverse-CDF sphere point: polar cosine uniform in [-1, 1), azimuth
  // uniform in [0, 2 pi). Draw order (z, azimuth, s) is part of the
  // reproducibility contract.
  const double z = rng.next_in(-1.0, 1.0);
  const double azimuth = rng.next_in(0.0, 2.0 * kPi);
  const double s = rng.next_unit();
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return PearleHidden{
      Direction::from_components(r * std::cos(azimuth), r * std::sin(azimuth), z), s};
}

Outcome PearleModel::evaluate(Side side, const Direction& dir, const HiddenVariable& hv) const {
  const PearleHidden& h = as_pearle(hv);
  const double c = h.e.dot(dir);
  if (std::abs(c) < threshold_(h.s)) return Outcome(0);
  const int sign = sign_pm(c);
  return Outcome(side == Side::Alice ? sign : -sign);
}

Outcome PearleModel::station_a(const Direction& a, const HiddenVariable& hv) const {
  return evaluate(Side::Alice, a, hv);
}

Outcome PearleModel::station_b(const Direction& b, const HiddenVariable& hv) const {
  return evaluate(Side::Bob, b, hv);
}

double singlet_correlation(const Direction& a, const Direction& b) {
  return -a.dot(b);
}

const LhvModel& model_by_name(std::string_view name) {
  static const PearleModel pearle;
  static const SocksModel socks;
  if (name == "pearle") return pearle;
  if (name == "socks") return socks;
  throw std::invalid_argument("unknown model name: " + std::string(name));
}

}  // namespace belllab
