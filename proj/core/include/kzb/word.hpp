#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kzb/torsion.hpp"

namespace kzb {

// Generators of the free algebra at level N: X, Y and T(alpha) for alpha != 0.
// Generator indices are 0 (X), 1 (Y), 1 + (x*N + y) for T(x, y).
struct Alphabet {
  int N = 1;

  explicit Alphabet(int level);
  int size() const { return N * N + 1; }
  static constexpr int X = 0;
  static constexpr int Y = 1;
  int t(const TorsionPoint& a) const;  // a must be nonzero
  bool is_t(int g) const { return g >= 2; }
  TorsionPoint point(int g) const;  // g must be a T generator
  std::string tag(int g) const;
  int parse_tag(const std::string& s) const;  // throws on malformed tags
};

// A word of at most 15 letters packed into 128 bits. Letters (generator
// index + 1) occupy bytes from the most significant end; the low byte holds
// the length. Integer order on the packed value is lexicographic order with
// prefixes first.
class Word {
 public:
  using Bits = unsigned __int128;
  static constexpr int kMaxLength = 15;

  constexpr Word() = default;

  static Word letter(int g) {
    Word w;
    w.bits_ = (static_cast<Bits>(g + 1) << 120) | 1u;
    return w;
  }
  static Word from(const std::vector<int>& gens);

  int length() const { return static_cast<int>(bits_ & 0xFF); }
  int operator[](int i) const { return static_cast<int>((bits_ >> (120 - 8 * i)) & 0xFF) - 1; }

  // Concatenation; caller guarantees the combined length fits.
  Word operator*(const Word& o) const {
    Word w;
    const Bits body = (bits_ & ~Bits(0xFF)) | ((o.bits_ & ~Bits(0xFF)) >> (8 * length()));
    w.bits_ = body | static_cast<Bits>(length() + o.length());
    return w;
  }

  // Letters [from, from + count).
  Word sub(int from, int count) const;

  std::vector<int> letters() const;
  Bits bits() const { return bits_; }

  friend bool operator==(const Word& a, const Word& b) { return a.bits_ == b.bits_; }
  friend bool operator<(const Word& a, const Word& b) { return a.bits_ < b.bits_; }

 private:
  Bits bits_ = 0;
};

struct WordHash {
  std::size_t operator()(const Word& w) const {
    const auto b = w.bits();
    const auto lo = static_cast<std::uint64_t>(b);
    const auto hi = static_cast<std::uint64_t>(b >> 64);
    return std::hash<std::uint64_t>{}(hi * 0x9E3779B97F4A7C15ull ^ lo);
  }
};

}  // namespace kzb
