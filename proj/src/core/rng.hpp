#pragma once

#include <cstdint>
#include <initializer_list>

namespace censync {

/// Counter-based random stream. The i-th draw is a pure function of
/// (seed, stream index, i), so distinct stream indices give statistically
/// independent sequences and a stream can be recreated anywhere without
/// replaying its predecessors.
class RandomStream {
public:
  RandomStream(uint64_t seed, uint64_t index);

  uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double next_double();
  bool bernoulli(double p);
  /// Uniform integer in [0, bound), bound > 0. Rejection-based, unbiased.
  uint64_t uniform_below(uint64_t bound);
  /// Standard normal via Box-Muller (one value per pair, spare cached).
  double next_gaussian();

  uint64_t seed() const { return seed_; }
  uint64_t index() const { return index_; }

  // UniformRandomBitGenerator interface.
  using result_type = uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~0ULL; }
  result_type operator()() { return next_u64(); }

private:
  uint64_t seed_;
  uint64_t index_;
  uint64_t key_;
  uint64_t counter_ = 0;
  double spare_gauss_ = 0.0;
  bool have_spare_ = false;
};

RandomStream split_stream(uint64_t seed, uint64_t index);

/// 64-bit finalizer with full avalanche (SplitMix64 style).
uint64_t mix64(uint64_t z);

/// Hash a short list of words into one stream index.
uint64_t hash_words(std::initializer_list<uint64_t> words);

}  // namespace censync
