#ifndef BELLLAB_RNG_HPP
#define BELLLAB_RNG_HPP

#include <cstdint>

namespace belllab {

// Philox-4x32 block cipher, 10 rounds. Counter-based: the value of any draw
// is a pure function of (key, counter), which is what makes per-slot streams
// reproducible under arbitrary partitioning of the slot range.
struct Philox4x32 {
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  struct Block {
    std::uint32_t v[4];
  };

  static Block encrypt(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                       std::uint32_t c3, std::uint32_t k0, std::uint32_t k1) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c0;
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c2;
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      const std::uint32_t n0 = hi1 ^ c1 ^ k0;
      const std::uint32_t n1 = lo1;
      const std::uint32_t n2 = hi0 ^ c3 ^ k1;
      const std::uint32_t n3 = lo0;
      c0 = n0;
      c1 = n1;
      c2 = n2;
      c3 = n3;
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    return Block{{c0, c1, c2, c3}};
  }
};

enum class StreamRole : std::uint32_t { Source = 0, AliceCoin = 1, BobCoin = 2 };

// Random stream keyed by (master seed, slot, role). Draws with the same key
// and draw index are identical across runs, chunkings and thread counts.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t slot, StreamRole role)
      : key_lo_(static_cast<std::uint32_t>(master_seed)),
        key_hi_(static_cast<std::uint32_t>(master_seed >> 32)),
        slot_lo_(static_cast<std::uint32_t>(slot)),
        slot_hi_(static_cast<std::uint32_t>(slot >> 32)),
        role_(static_cast<std::uint32_t>(role)) {}

  std::uint64_t next_u64() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const auto block =
        Philox4x32::encrypt(block_index_++, role_, slot_lo_, slot_hi_, key_lo_, key_hi_);
    spare_ = (static_cast<std::uint64_t>(block.v[2]) << 32) | block.v[3];
    have_spare_ = true;
    return (static_cast<std::uint64_t>(block.v[0]) << 32) | block.v[1];
  }

  // Uniform in [0, 1), 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  // Fair coin as -1 or +1.
  int next_coin() { return (next_u64() >> 63) ? +1 : -1; }

 private:
  std::uint32_t key_lo_, key_hi_;
  std::uint32_t slot_lo_, slot_hi_;
  std::uint32_t role_;
  std::uint32_t block_index_ = 0;
  std::uint64_t spare_ = 0;
  bool have_spare_ = false;
};

inline RandomStream substream(std::uint64_t master_seed, std::uint64_t slot, StreamRole role) {
  return RandomStream(master_seed, slot, role);
}

}  // namespace belllab

#endif  // BELLLAB_RNG_HPP
