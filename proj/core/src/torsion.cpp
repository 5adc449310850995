#include "kzb/torsion.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace kzb {

namespace {

int mod(std::int64_t v, int n) {
  std::int64_t r = v % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

}  // namespace

std::string Mat2::str() const { return fmt::format("[[{},{}],[{},{}]]", a, b, c, d); }

bool in_principal_congruence(const Mat2& m, int n) {
  return mod(m.a, n) == 1 % n && mod(m.b, n) == 0 && mod(m.c, n) == 0 && mod(m.d, n) == 1 % n;
}

bool in_gamma1(const Mat2& m, int n) {
  return mod(m.a, n) == 1 % n && mod(m.c, n) == 0 && mod(m.d, n) == 1 % n;
}

TorsionPoint::TorsionPoint(int x_, int y_, int N_) : N(N_) {
  if (N_ < 1) throw std::invalid_argument("torsion level must be positive");
  x = mod(x_, N_);
  y = mod(y_, N_);
}

TorsionPoint TorsionPoint::operator+(const TorsionPoint& o) const {
  if (o.N != N) throw std::invalid_argument("torsion level mismatch");
  return {x + o.x, y + o.y, N};
}

TorsionPoint TorsionPoint::operator-(const TorsionPoint& o) const {
  if (o.N != N) throw std::invalid_argument("torsion level mismatch");
  return {x - o.x, y - o.y, N};
}

TorsionPoint TorsionPoint::operator-() const { return {-x, -y, N}; }

std::string TorsionPoint::str() const { return fmt::format("({},{})", x, y); }

std::vector<TorsionPoint> torsion_group(int N) {
  if (N < 1) throw std::invalid_argument("torsion level must be positive");
  std::vector<TorsionPoint> out;
  out.reserve(static_cast<std::size_t>(N) * N);
  for (int x = 0; x < N; ++x)
    for (int y = 0; y < N; ++y) out.emplace_back(x, y, N);
  return out;
}

TorsionPoint torsion_act_right(const TorsionPoint& p, const Mat2& g) {
  if (g.det() != 1) throw std::invalid_argument("matrix is not in SL2(Z): " + g.str());
  const std::int64_t nx = g.d * p.x + g.b * p.y;
  const std::int64_t ny = g.c * p.x + g.a * p.y;
  return {mod(nx, p.N), mod(ny, p.N), p.N};
}

Subgroup parse_subgroup(const std::string& s) {
  if (s == "full") return Subgroup::Full;
  if (s == "gamma1") return Subgroup::Gamma1;
  if (s == "sl2z") return Subgroup::SL2Z;
  throw std::invalid_argument("unknown subgroup selector: " + s);
}

std::string subgroup_name(Subgroup s) {
  switch (s) {
    case Subgroup::Full: return "full";
    case Subgroup::Gamma1: return "gamma1";
    case Subgroup::SL2Z: return "sl2z";
  }
  return "?";
}

bool admits(Subgroup s, const TorsionPoint& a) {
  if (a.is_zero()) return true;
  switch (s) {
    case Subgroup::Full: return true;
    case Subgroup::Gamma1: return a.y == 0;
    case Subgroup::SL2Z: return false;
  }
  return false;
}

bool in_subgroup(Subgroup s, const Mat2& g, int N) {
  if (g.det() != 1) return false;
  switch (s) {
    case Subgroup::Full: return in_principal_congruence(g, N);
    case Subgroup::Gamma1: return in_gamma1(g, N);
    case Subgroup::SL2Z: return true;
  }
  return false;
}

}  // namespace kzb
