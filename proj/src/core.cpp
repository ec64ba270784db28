#include "belllab/core.hpp"

namespace belllab {

std::array<SignPattern, 8> odd_sign_patterns() {
  std::array<SignPattern, 8> out;
  std::size_t k = 0;
  for (int mask = 0; mask < 16; ++mask) {
    SignPattern p;
    int negatives = 0;
    for (int i = 0; i < 4; ++i) {
      p.s[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? -1 : +1;
      if (p.s[static_cast<std::size_t>(i)] < 0) ++negatives;
    }
    if (negatives % 2 == 1) out[k++] = p;
  }
  return out;
}

}  // namespace belllab
