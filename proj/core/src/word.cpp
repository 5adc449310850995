#include "kzb/word.hpp"

#include <cstdio>
#include <stdexcept>

#include <fmt/format.h>

namespace kzb {

Alphabet::Alphabet(int level) : N(level) {
  if (level < 1) throw std::invalid_argument("level must be positive");
  if (level * level + 1 > 255) throw std::invalid_argument("level too large for packed words");
}

int Alphabet::t(const TorsionPoint& a) const {
  if (a.N != N) throw std::invalid_argument("torsion level mismatch");
  if (a.is_zero()) throw std::invalid_argument("t_0 is not a generator");
  return 1 + a.x * N + a.y;
}

TorsionPoint Alphabet::point(int g) const {
  if (!is_t(g) || g >= size()) throw std::invalid_argument("not a torsion generator");
  const int k = g - 1;
  return {k / N, k % N, N};
}

std::string Alphabet::tag(int g) const {
  if (g == X) return "X";
  if (g == Y) return "Y";
  const TorsionPoint p = point(g);
  return fmt::format("T({},{})", p.x, p.y);
}

int Alphabet::parse_tag(const std::string& s) const {
  if (s == "X") return X;
  if (s == "Y") return Y;
  int x = 0, y = 0;
  char tail = 0;
  if (std::sscanf(s.c_str(), "T(%d,%d%c", &x, &y, &tail) == 3 && tail == ')' &&
      s.back() == ')' && x >= 0 && y >= 0 && x < N && y < N && (x != 0 || y != 0))
    return t({x, y, N});
  throw std::invalid_argument("malformed generator tag: " + s);
}

Word Word::from(const std::vector<int>& gens) {
  if (static_cast<int>(gens.size()) > kMaxLength) throw std::invalid_argument("word too long");
  Word w;
  for (int g : gens) w = w * letter(g);
  return w;
}

Word Word::sub(int from, int count) const {
  Word w;
  if (count <= 0) return w;
  const Bits shifted = bits_ << (8 * from);
  const Bits mask = ~Bits(0) << (128 - 8 * count);
  w.bits_ = (shifted & mask) | static_cast<Bits>(count);
  return w;
}

std::vector<int> Word::letters() const {
  std::vector<int> out(static_cast<std::size_t>(length()));
  for (int i = 0; i < length(); ++i) out[static_cast<std::size_t>(i)] = (*this)[i];
  return out;
}

}  // namespace kzb
