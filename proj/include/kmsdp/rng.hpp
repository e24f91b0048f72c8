#pragma once

#include <cstdint>

namespace kmsdp {

// SplitMix64 finalizer. Bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Derives a decorrelated stream key from (base, salt). Used to key
// per-component and per-trial generators so parallel work is reproducible.
inline std::uint64_t derive_stream(std::uint64_t base, std::uint64_t salt) {
  return mix64(base + 0x9e3779b97f4a7c15ull * (salt + 1));
}

// Counter-based generator: output i is mix64(key + (i+1)*golden), the
// SplitMix64 sequence seeded at the stream key. State is two words, so
// distinct streams never share mutable state.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t stream)
      : key_(derive_stream(seed, stream)) {}

  std::uint64_t next_u64() {
    counter_ += 0x9e3779b97f4a7c15ull;
    return mix64(key_ + counter_);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; the paired value is cached.
  double next_normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace kmsdp
