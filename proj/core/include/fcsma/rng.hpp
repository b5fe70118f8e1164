#ifndef FCSMA_RNG_HPP
#define FCSMA_RNG_HPP

#include <cmath>
#include <cstdint>

namespace fcsma {

// Finalizer from splitmix64. Bijective on 64-bit words, good avalanche.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

enum class StreamPurpose : std::uint64_t {
  Arrival = 1,
  Channel = 2,
  DropAllowance = 3,
  Scheduler = 4,
  Oracle = 5,
};

// Counter-based generator: draw i of a stream is a hash of (key, i), where
// the key is derived from (seed, purpose, entity). Streams with distinct
// keys are independent by construction, so adding draws to one stream can
// never perturb another. Copyable; jumping is O(1).
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t entity = 0)
      : key_(derive_key(seed, static_cast<std::uint64_t>(purpose), entity)) {}

  std::uint64_t next_u64() {
    ++counter_;
    return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ull);
  }

  // [0, 1)
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // (0, 1); safe to feed into log()
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  double standard_exponential() { return -std::log(uniform_open()); }

  double exponential(double rate) { return standard_exponential() / rate; }

  double gumbel() { return -std::log(standard_exponential()); }

  std::uint64_t draw_index() const { return counter_; }
  void jump_to(std::uint64_t draw_index) { counter_ = draw_index; }

 private:
  static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t purpose,
                                  std::uint64_t entity) {
    std::uint64_t k = mix64(seed ^ 0x8A91B7E0C54F3D21ull);
    k = mix64(k + purpose * 0xD1B54A32D192ED03ull);
    k = mix64(k + entity * 0xA24BAED4963EE407ull);
    return k;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace fcsma

#endif
