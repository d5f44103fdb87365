#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace raypet {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Folds a list of identifiers into one key; used to split streams per
// clip, frame and purpose so generation order never affects the output.
constexpr std::uint64_t derive_key(std::initializer_list<std::uint64_t> ids) {
  std::uint64_t key = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t id : ids) key = mix64(key ^ mix64(id));
  return key;
}

// FNV-1a over the bytes of s, for keying streams by name.
constexpr std::uint64_t hash_string(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char ch : s) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Counter-based generator: the n-th draw is mix64(key + n * golden), so a
// stream is fully determined by its key and position. All distributions are
// implemented here rather than with <random> so results do not depend on the
// standard library in use.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}
  CounterRng(std::initializer_list<std::uint64_t> ids) : key_(derive_key(ids)) {}

  std::uint64_t next_u64() {
    return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  bool bernoulli(double p) { return uniform() < p; }
  double normal();
  double normal(double mean, double sigma) { return mean + sigma * normal(); }
  int poisson(double mean);

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0;
};

}  // namespace raypet
