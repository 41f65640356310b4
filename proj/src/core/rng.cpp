#include "core/rng.hpp"

#include <cmath>

#include "core/error.hpp"

namespace censync {

namespace {
constexpr uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
}

uint64_t mix64(uint64_t z) {
  z += kGamma;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t hash_words(std::initializer_list<uint64_t> words) {
  uint64_t h = 0x2545f4914f6cdd1dULL;
  for (uint64_t w : words) h = mix64(h ^ mix64(w));
  return h;
}

RandomStream::RandomStream(uint64_t seed, uint64_t index)
    : seed_(seed), index_(index) {
  key_ = mix64(seed ^ mix64(index ^ 0x5851f42d4c957f2dULL));
}

RandomStream split_stream(uint64_t seed, uint64_t index) {
  return RandomStream(seed, index);
}

uint64_t RandomStream::next_u64() {
  return mix64(key_ ^ mix64(counter_++));
}

double RandomStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

bool RandomStream::bernoulli(double p) {
  if (!(p >= 0.0) || !(p <= 1.0)) fail_invalid("bernoulli: p outside [0,1]");
  return next_double() < p;
}

uint64_t RandomStream::uniform_below(uint64_t bound) {
  if (bound == 0) fail_invalid("uniform_below: bound must be positive");
  if ((bound & (bound - 1)) == 0) return next_u64() & (bound - 1);
  uint64_t limit = ~0ULL - (~0ULL % bound);
  uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % bound;
}

double RandomStream::next_gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_gauss_;
  }
  double u, v, s;
  do {
    u = 2.0 * next_double() - 1.0;
    v = 2.0 * next_double() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_gauss_ = v * f;
  have_spare_ = true;
  return u * f;
}

}  // namespace censync
