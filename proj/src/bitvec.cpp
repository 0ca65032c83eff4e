#include "xfsynth/bitvec.hpp"

namespace xfsynth::bv {

bool fits(int64_t v, int w, bool sgn) { return v >= min_value(w, sgn) && v <= max_value(w, sgn); }

uint64_t shl(uint64_t x, uint64_t amt, int w) {
  amt &= mask(w);
  if (amt >= uint64_t(w)) return 0;
  return (x << amt) & mask(w);
}

uint64_t lshr(uint64_t x, uint64_t amt, int w) {
  amt &= mask(w);
  x &= mask(w);
  if (amt >= uint64_t(w)) return 0;
  return x >> amt;
}

uint64_t ashr(uint64_t x, uint64_t amt, int w) {
  amt &= mask(w);
  int64_t s = to_signed(x, w);
  if (amt >= uint64_t(w)) return s < 0 ? mask(w) : 0;
  return bits(s >> amt, w);
}

uint64_t min_or(uint64_t a, uint64_t b, uint64_t c, uint64_t d, int w) {
  const uint64_t M = mask(w);
  for (uint64_t m = uint64_t(1) << (w - 1); m; m >>= 1) {
    if (~a & c & m) {
      uint64_t t = (a | m) & (-m & M);
      if (t <= b) { a = t; break; }
    } else if (a & ~c & m) {
      uint64_t t = (c | m) & (-m & M);
      if (t <= d) { c = t; break; }
    }
  }
  return (a | c) & M;
}

uint64_t max_or(uint64_t a, uint64_t b, uint64_t c, uint64_t d, int w) {
  const uint64_t M = mask(w);
  for (uint64_t m = uint64_t(1) << (w - 1); m; m >>= 1) {
    if (b & d & m) {
      uint64_t t = ((b - m) | (m - 1)) & M;
      if (t >= a) { b = t; break; }
      t = ((d - m) | (m - 1)) & M;
      if (t >= c) { d = t; break; }
    }
  }
  return (b | d) & M;
}

uint64_t min_and(uint64_t a, uint64_t b, uint64_t c, uint64_t d, int w) {
  const uint64_t M = mask(w);
  for (uint64_t m = uint64_t(1) << (w - 1); m; m >>= 1) {
    if (~a & ~c & m) {
      uint64_t t = (a | m) & (-m & M);
      if (t <= b) { a = t; break; }
      t = (c | m) & (-m & M);
      if (t <= d) { c = t; break; }
    }
  }
  return a & c & M;
}

uint64_t min_and_buggy(uint64_t a, uint64_t b, uint64_t c, uint64_t d, int w) {
  const uint64_t M = mask(w);
  for (uint64_t m = uint64_t(1) << (w - 1); m; m >>= 1) {
    if (~a & ~c & m) {
      uint64_t t = (a | m) & (~m & M);
      if (t <= b) { a = t; break; }
      t = (c | m) & (~m & M);
      if (t <= d) { c = t; break; }
    }
  }
  return a & c & M;
}

uint64_t max_and(uint64_t a, uint64_t b, uint64_t c, uint64_t d, int w) {
  const uint64_t M = mask(w);
  for (uint64_t m = uint64_t(1) << (w - 1); m; m >>= 1) {
    if (b & ~d & m) {
      uint64_t t = ((b & ~m) | (m - 1)) & M;
      if (t >= a) { b = t; break; }
    } else if (~b & d & m) {
      uint64_t t = ((d & ~m) | (m - 1)) & M;
      if (t >= c) { d = t; break; }
    }
  }
  return b & d & M;
}

uint64_t min_xor(uint64_t a, uint64_t b, uint64_t c, uint64_t d, int w) {
  const uint64_t M = mask(w);
  for (uint64_t m = uint64_t(1) << (w - 1); m; m >>= 1) {
    if (~a & c & m) {
      uint64_t t = (a | m) & (-m & M);
      if (t <= b) a = t;
    } else if (a & ~c & m) {
      uint64_t t = (c | m) & (-m & M);
      if (t <= d) c = t;
    }
  }
  return (a ^ c) & M;
}

uint64_t max_xor(uint64_t a, uint64_t b, uint64_t c, uint64_t d, int w) {
  const uint64_t M = mask(w);
  for (uint64_t m = uint64_t(1) << (w - 1); m; m >>= 1) {
    if (b & d & m) {
      uint64_t t = ((b - m) | (m - 1)) & M;
      if (t >= a) {
        b = t;
      } else {
        t = ((d - m) | (m - 1)) & M;
        if (t >= c) d = t;
      }
    }
  }
  return (b ^ d) & M;
}

}  // namespace xfsynth::bv
