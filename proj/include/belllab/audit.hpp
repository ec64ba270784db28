#ifndef BELLLAB_AUDIT_HPP
#define BELLLAB_AUDIT_HPP

#include <span>
#include <string>
#include <vector>

#include "belllab/core.hpp"

namespace belllab::audit {

enum class Conditioning { All, DetectedOnly };

struct Comparison {
  std::string functional;  // which scalar projection of the hidden variable
  SettingPair pair_x;
  SettingPair pair_y;
  std::size_t n_x = 0;
  std::size_t n_y = 0;
  double d = 0.0;
  double p = 1.0;
};

struct AuditReport {
  Conditioning conditioning = Conditioning::All;
  double alpha = 1e-3;
  std::size_t n_tests = 0;        // functionals x pair-of-pairs comparisons
  double alpha_corrected = 1e-3;  // Bonferroni: alpha / n_tests
  std::vector<Comparison> comparisons;
  double max_d = 0.0;
  double min_p = 1.0;
  bool conspiracy_detected = false;

  std::string verdict() const {
    return conspiracy_detected ? "CONSPIRACY DETECTED" : "CONSPIRACY-FREE";
  }
};

// Tests whether the hidden-variable distribution depends on the setting pair
// within the chosen conditioning set. Conditioning on every slot must come
// out clean for any model whose settings never reach the source; conditioning
// on detected pairs is where post-selection leaves its fingerprint. Scalar
// projections per model: Pearle -> s, |e.a|, |e.b|; socks -> coin.
AuditReport conspiracy_audit(std::span<const TrialRecord> records, Conditioning conditioning,
                             double alpha = 1e-3);

}  // namespace belllab::audit

#endif  // BELLLAB_AUDIT_HPP
