#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "xfsynth/bitvec.hpp"

using namespace xt;

namespace {

struct Case {
  const char* name;
  Dom d;
  Ctx c;
};

std::vector<Case> cases() {
  std::vector<Case> out;
  Ctx iz;
  iz.N = 4;
  out.push_back({"interval_z", Dom::IntervalZ, iz});
  Ctx bv;
  bv.w = 3;
  out.push_back({"unsigned", Dom::UInt, bv});
  out.push_back({"signed", Dom::SInt, bv});
  out.push_back({"wrapped", Dom::Wrapped, bv});
  Ctx s;
  s.sigma = " ab";
  s.max_len = 3;
  s.out_max_len = 3;
  out.push_back({"ci", Dom::CI, s});
  out.push_back({"ps", Dom::PS, s});
  out.push_back({"ssk", Dom::SS, s});
  Ctx cs = s;
  cs.k = 1;
  out.push_back({"cs", Dom::CS, cs});
  Ctx sh = s;
  sh.b = 4;
  sh.hash_index = {0, 1, 3};
  out.push_back({"sh", Dom::SH, sh});
  return out;
}

std::vector<bool> gamma_of(const Case& k, const Value& a, const std::vector<Value>& uni) {
  std::vector<bool> g(uni.size());
  for (size_t i = 0; i < uni.size(); ++i) g[i] = gamma_contains(k.c, k.d, a, uni[i]);
  return g;
}

bool subset(const std::vector<bool>& a, const std::vector<bool>& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] && !b[i]) return false;
  return true;
}

}  // namespace

TEST(Domain, OrderJoinAndExtremesAgreeWithConcretization) {
  for (auto& k : cases()) {
    k.c.validate();
    auto uni = concrete_universe(k.c, k.d, false);
    auto vals = enumerate_abstract(k.c, k.d);
    ASSERT_FALSE(vals.empty()) << k.name;
    std::vector<std::vector<bool>> g;
    for (const auto& v : vals) g.push_back(gamma_of(k, v, uni));
    auto gb = gamma_of(k, bottom(k.c, k.d), uni);
    auto gt = gamma_of(k, top(k.c, k.d), uni);
    EXPECT_EQ(std::count(gb.begin(), gb.end(), true), 0) << k.name;
    EXPECT_EQ(std::count(gt.begin(), gt.end(), true), long(uni.size())) << k.name;
    // pairs are sampled for the larger domains
    std::mt19937 rng(7);
    size_t n = vals.size();
    size_t pairs = std::min<size_t>(n * n, 40000);
    for (size_t t = 0; t < pairs; ++t) {
      size_t i = n * n <= 40000 ? t / n : rng() % n;
      size_t j = n * n <= 40000 ? t % n : rng() % n;
      if (leq(k.c, k.d, vals[i], vals[j])) EXPECT_TRUE(subset(g[i], g[j])) << k.name << " " << format_value(k.c, k.d, vals[i]);
      auto gj = gamma_of(k, join(k.c, k.d, vals[i], vals[j]), uni);
      EXPECT_TRUE(subset(g[i], gj) && subset(g[j], gj)) << k.name;
    }
    // bounded lengths can empty a prefix/suffix pair without making it bottom,
    // and [+inf, +inf] holds no integer
    auto at_infinity = [&](const Value& v) {
      if (k.d != Dom::IntervalZ) return false;
      const auto& iv = std::get<Interval>(v);
      return iv.l == iv.r && (iv.l == kPosInf || iv.l == kNegInf);
    };
    for (size_t i = 0; i < n; ++i) {
      bool empty = std::count(g[i].begin(), g[i].end(), true) == 0;
      if (is_bot(k.c, k.d, vals[i])) EXPECT_TRUE(empty) << k.name;
      else if (k.d != Dom::PS && !at_infinity(vals[i]))
        EXPECT_FALSE(empty) << k.name << " " << format_value(k.c, k.d, vals[i]);
    }
  }
}

TEST(Domain, AbstractionIsSoundAndMinimal) {
  for (auto& k : cases()) {
    auto uni = concrete_universe(k.c, k.d, false);
    auto vals = enumerate_abstract(k.c, k.d);
    std::mt19937 rng(11);
    for (int trial = 0; trial < 150; ++trial) {
      std::vector<Value> S;
      size_t m = 1 + rng() % 4;
      for (size_t i = 0; i < m; ++i) S.push_back(uni[rng() % uni.size()]);
      Value a = alpha_set(k.c, k.d, S);
      auto ga = gamma_of(k, a, uni);
      for (const auto& x : S) EXPECT_TRUE(gamma_contains(k.c, k.d, a, x)) << k.name;
      // no enumerated value covering S has a strictly smaller concretization
      size_t na = std::count(ga.begin(), ga.end(), true);
      for (const auto& v : vals) {
        bool covers = true;
        for (const auto& x : S) covers &= gamma_contains(k.c, k.d, v, x);
        if (!covers) continue;
        auto gv = gamma_of(k, v, uni);
        if (has_galois(k.d)) EXPECT_TRUE(subset(ga, gv)) << k.name << " " << format_value(k.c, k.d, v);
        else EXPECT_LE(na, size_t(std::count(gv.begin(), gv.end(), true))) << k.name;
      }
    }
  }
}

TEST(Domain, SingletonAbstractionContainsItsValue) {
  for (auto& k : cases())
    for (const auto& x : concrete_universe(k.c, k.d, false))
      EXPECT_TRUE(gamma_contains(k.c, k.d, alpha_single(k.c, k.d, x), x)) << k.name;
}

TEST(Domain, FormatParseRoundTrip) {
  for (auto& k : cases()) {
    for (const auto& v : enumerate_abstract(k.c, k.d)) {
      std::string s = format_value(k.c, k.d, v);
      Value back = parse_value(k.c, k.d, s);
      EXPECT_EQ(format_value(k.c, k.d, back), s) << k.name;
      EXPECT_TRUE(back == v) << k.name << " " << s;
    }
  }
}

TEST(Domain, WrappedMembershipFollowsTheCircle) {
  Ctx c;
  c.w = 4;
  Value a = parse_value(c, Dom::Wrapped, "[14, 1]");
  for (int x = 0; x < 16; ++x) EXPECT_EQ(gamma_contains(c, Dom::Wrapped, a, int64_t(x)), x >= 14 || x <= 1) << x;
  auto parts = split_at_zero(c, std::get<Wrapped>(a));
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_THROW(parse_value(c, Dom::Wrapped, "[5, 4]"), ConfigError);
}

TEST(Domain, StringHelpers) {
  EXPECT_EQ(lcp("abcd", "abx"), "ab");
  EXPECT_EQ(lcs("xcd", "abcd"), "cd");
  EXPECT_EQ(trim_spaces("  a b "), "a b");
  EXPECT_EQ(trim_start("  a "), "a ");
  EXPECT_EQ(trim_end("  a "), "  a");
  Ctx c;
  c.sigma = "ab";
  EXPECT_EQ(strings_upto(c, 2).size(), 7u);
}

TEST(Domain, ConcreteOperations) {
  Ctx c;
  c.w = 4;
  auto run = [&](Dom d, Op op, std::vector<Value> args) { return concrete_op(c, d, op, args.data()); };
  EXPECT_EQ(std::get<int64_t>(*run(Dom::SInt, Op::Mul, {int64_t(-2), int64_t(3)})), -6);
  EXPECT_EQ(std::get<int64_t>(*run(Dom::SInt, Op::Mul, {int64_t(-3), int64_t(3)})), 7);  // -9 wraps
  EXPECT_EQ(std::get<int64_t>(*run(Dom::SInt, Op::Mul, {int64_t(4), int64_t(4)})), 0);  // wraps mod 16
  EXPECT_EQ(std::get<int64_t>(*run(Dom::UInt, Op::Shl, {int64_t(3), int64_t(2)})), 12);
  EXPECT_EQ(std::get<int64_t>(*run(Dom::SInt, Op::Ashr, {int64_t(-8), int64_t(1)})), -4);
  Ctx s;
  s.sigma = " aA";
  s.case_pairs = {{'a', 'A'}};
  auto str = [&](Op op, std::vector<Value> args) { return concrete_op(s, Dom::CI, op, args.data()); };
  EXPECT_EQ(std::get<std::string>(*str(Op::Trim, {std::string(" a ")})), "a");
  EXPECT_EQ(std::get<std::string>(*str(Op::ToUpper, {std::string("aA ")})), "AA ");
  EXPECT_TRUE(std::get<bool>(*str(Op::Contains, {std::string("aAa"), std::string("Aa")})));
  EXPECT_FALSE(str(Op::CharAt, {std::string("")}).has_value());
}

// Bounds of x OP y over unsigned ranges against exhaustive enumeration.
TEST(BitVec, BoundHelpersMatchBruteForce) {
  const int w = 4;
  for (uint64_t a = 0; a < 16; ++a)
    for (uint64_t b = a; b < 16; ++b)
      for (uint64_t c = 0; c < 16; ++c)
        for (uint64_t d = c; d < 16; ++d) {
          uint64_t mnA = 99, mxA = 0, mnO = 99, mxO = 0, mnX = 99, mxX = 0;
          for (uint64_t x = a; x <= b; ++x)
            for (uint64_t y = c; y <= d; ++y) {
              mnA = std::min(mnA, x & y), mxA = std::max(mxA, x & y);
              mnO = std::min(mnO, x | y), mxO = std::max(mxO, x | y);
              mnX = std::min(mnX, x ^ y), mxX = std::max(mxX, x ^ y);
            }
          ASSERT_EQ(bv::min_and(a, b, c, d, w), mnA);
          ASSERT_EQ(bv::max_and(a, b, c, d, w), mxA);
          ASSERT_EQ(bv::min_or(a, b, c, d, w), mnO);
          ASSERT_EQ(bv::max_or(a, b, c, d, w), mxO);
          ASSERT_EQ(bv::min_xor(a, b, c, d, w), mnX);
          ASSERT_EQ(bv::max_xor(a, b, c, d, w), mxX);
        }
}

TEST(BitVec, ShiftsOnPatterns) {
  EXPECT_EQ(bv::shl(0b0011, 2, 4), 0b1100u);
  EXPECT_EQ(bv::shl(0b0011, 4, 4), 0u);
  EXPECT_EQ(bv::lshr(0b1000, 3, 4), 1u);
  EXPECT_EQ(bv::ashr(0b1000, 1, 4), 0b1100u);
  EXPECT_EQ(bv::ashr(0b1000, 9, 4), 0b1111u);
  EXPECT_EQ(bv::to_signed(0b1111, 4), -1);
  EXPECT_TRUE(bv::fits(-8, 4, true));
  EXPECT_FALSE(bv::fits(8, 4, true));
}

TEST(Hash, SumsetFormulationsAgree) {
  // direct: {(x + y) mod b}; loop: rotate the reversed second set past the first
  const int b = 6;
  for (uint64_t h1 = 0; h1 < 64; ++h1)
    for (uint64_t h2 = 0; h2 < 64; ++h2) {
      uint64_t direct = 0;
      for (int x = 0; x < b; ++x)
        for (int y = 0; y < b; ++y)
          if ((h1 >> x & 1) && (h2 >> y & 1)) direct |= uint64_t(1) << ((x + y) % b);
      EXPECT_EQ(sh_sumset(h1, h2, b), direct);
    }
  EXPECT_EQ(rotl_bits(0b100001, 1, 6), 0b000011u);
  EXPECT_EQ(rotr_bits(0b000011, 1, 6), 0b100001u);
  EXPECT_EQ(reverse_bits(0b000011, 6), 0b110000u);
}
