#pragma once

#include <cstdint>

namespace xfsynth::bv {

inline uint64_t mask(int w) { return w >= 64 ? ~uint64_t(0) : ((uint64_t(1) << w) - 1); }

inline uint64_t bits(int64_t v, int w) { return uint64_t(v) & mask(w); }

inline int64_t to_signed(uint64_t x, int w) {
  x &= mask(w);
  if (w < 64 && ((x >> (w - 1)) & 1)) return int64_t(x) - (int64_t(1) << w);
  return int64_t(x);
}

// Reinterpret the low w bits of v in the requested signedness.
inline int64_t norm(int64_t v, int w, bool sgn) {
  return sgn ? to_signed(bits(v, w), w) : int64_t(bits(v, w));
}

inline int64_t min_value(int w, bool sgn) { return sgn ? -(int64_t(1) << (w - 1)) : 0; }
inline int64_t max_value(int w, bool sgn) {
  return sgn ? (int64_t(1) << (w - 1)) - 1 : int64_t(mask(w));
}

bool fits(int64_t v, int w, bool sgn);

// Bit-level shifts on w-bit patterns. Amounts are read as unsigned w-bit
// numbers; amounts >= w give 0 (shl, lshr) or the sign fill (ashr).
uint64_t shl(uint64_t x, uint64_t amt, int w);
uint64_t lshr(uint64_t x, uint64_t amt, int w);
uint64_t ashr(uint64_t x, uint64_t amt, int w);

// Bounds of x OP y over x in [a,b], y in [c,d] (unsigned w-bit ranges),
// following Hacker's Delight section 4-3.
uint64_t min_or(uint64_t a, uint64_t b, uint64_t c, uint64_t d, int w);
uint64_t max_or(uint64_t a, uint64_t b, uint64_t c, uint64_t d, int w);
uint64_t min_and(uint64_t a, uint64_t b, uint64_t c, uint64_t d, int w);
uint64_t max_and(uint64_t a, uint64_t b, uint64_t c, uint64_t d, int w);
uint64_t min_xor(uint64_t a, uint64_t b, uint64_t c, uint64_t d, int w);
uint64_t max_xor(uint64_t a, uint64_t b, uint64_t c, uint64_t d, int w);

// minAnd as transcribed with bitwise negation (& ~m) instead of -m.
uint64_t min_and_buggy(uint64_t a, uint64_t b, uint64_t c, uint64_t d, int w);

}  // namespace xfsynth::bv
