#pragma once
// Deterministic random source for probe-point evaluation. A single seeded
// generator is used per session; the seed is recorded in reports so that
// every numeric claim is reproducible.
#include <cstdint>
#include <gmpxx.h>

namespace gct {

class Rng {
 public:
  explicit Rng(uint64_t seed = 0x5eed5eedULL) { reset(seed); }

  void reset(uint64_t seed) {
    seed_ = seed;
    s_ = seed ? seed : 0x9e3779b97f4a7c15ULL;
  }
  uint64_t seed() const { return seed_; }

  uint64_t next() {  // splitmix64
    uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform integer in [lo, hi].
  long range(long lo, long hi) {
    return lo + (long)(next() % (uint64_t)(hi - lo + 1));
  }

  // Random rational in [-10, 10] with denominator <= 97.
  mpq_class rat() {
    long d = range(1, 97);
    long n = range(-10 * d, 10 * d);
    mpq_class q(n, d);
    q.canonicalize();
    return q;
  }

  // As rat() but never zero (handy for coordinates that sit in denominators).
  mpq_class rat_nonzero() {
    for (int i = 0; i < 64; ++i) {
      mpq_class q = rat();
      if (q != 0) return q;
    }
    return mpq_class(1, 3);
  }

 private:
  uint64_t seed_ = 0;
  uint64_t s_ = 0;
};

Rng& rng();                   // process-wide generator
void set_global_seed(uint64_t seed);

}  // namespace gct
