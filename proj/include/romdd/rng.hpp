// SPDX-License-Identifier: MIT

#pragma once

#include <cstdint>

namespace romdd
{

/// Deterministic uniform RNG. std::uniform_real_distribution is
/// implementation-defined, so doubles are derived from the raw 64-bit
/// stream directly; identical seeds give identical streams on every
/// platform.
class Rng
{
public:
   explicit Rng(uint64_t seed) : state_(seed) {}

   uint64_t next_u64()
   {
      // xorshift* keeps the state tiny and the stream reproducible.
      uint64_t x = state_ += 0x9e3779b97f4a7c15ull;
      x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
      x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
      return x ^ (x >> 31);
   }

   /// Uniform double in [0, 1).
   double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

   /// Uniform double in [lo, hi).
   double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

   /// Uniform integer in [0, n).
   uint64_t uniform_index(uint64_t n) { return next_u64() % n; }

   /// Independent child stream for item i (snapshot jobs use stream
   /// (seed, i) so samples are identical regardless of execution order).
   static Rng substream(uint64_t seed, uint64_t i)
   {
      Rng mix(seed);
      mix.state_ ^= 0xd1342543de82ef95ull * (i + 1);
      mix.next_u64();
      return mix;
   }

private:
   uint64_t state_;
};

} // namespace romdd
