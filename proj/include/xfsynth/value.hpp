#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace xfsynth {

// Sentinels for the extended integers used by the unbounded interval DSL.
constexpr int64_t kPosInf = int64_t(1) << 62;
constexpr int64_t kNegInf = -kPosInf;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CharSet {
  uint32_t bits = 0;
  bool operator==(const CharSet&) const = default;
};

// Shared by the unbounded (IntervalZ) and fixed-width (unsigned/signed)
// interval domains; the context decides how endpoints are interpreted.
struct Interval {
  bool bot = true;
  int64_t l = 0, r = 0;
  bool operator==(const Interval&) const = default;
};

struct Wrapped {
  enum Kind : uint8_t { Bot, Top, Pair };
  Kind kind = Bot;
  uint32_t a = 0, b = 0;
  bool operator==(const Wrapped&) const = default;
};

struct CIVal {
  bool bot = true;
  uint32_t L = 0, U = 0;
  bool operator==(const CIVal&) const = default;
};

struct PSVal {
  bool bot = true;
  std::string pre, suf;
  bool operator==(const PSVal&) const = default;
};

struct SHVal {
  uint64_t H = 0;  // empty set is bottom
  bool operator==(const SHVal&) const = default;
};

struct SSVal {
  bool top = false;
  std::vector<std::string> S;  // sorted by string order, no duplicates
  bool operator==(const SSVal&) const = default;
};

enum class AB : uint8_t { Bot, True, False, Top };

struct ABool {
  AB v = AB::Bot;
  bool operator==(const ABool&) const = default;
};

// monostate doubles as the placeholder produced while tracing sketches.
using Value = std::variant<std::monostate, bool, int64_t, std::string, CharSet,
                           Interval, Wrapped, CIVal, PSVal, SHVal, SSVal, ABool>;

size_t hash_value(const Value& v);

struct ValueHash {
  size_t operator()(const Value& v) const { return hash_value(v); }
};

inline size_t hash_mix(size_t h, size_t x) {
  return h ^ (x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

struct TupleHash {
  size_t operator()(const std::vector<Value>& t) const {
    size_t h = t.size();
    for (const auto& v : t) h = hash_mix(h, hash_value(v));
    return h;
  }
};

template <class T>
const T& as(const Value& v) {
  if (auto p = std::get_if<T>(&v)) return *p;
  throw ConfigError("value has unexpected type");
}

inline int64_t as_int(const Value& v) { return as<int64_t>(v); }

}  // namespace xfsynth
