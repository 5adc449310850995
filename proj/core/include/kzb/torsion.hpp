#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace kzb {

// Integer 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
  std::int64_t a = 1, b = 0, c = 0, d = 1;

  std::int64_t det() const { return a * d - b * c; }
  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Mat2 inverse() const { return {d, -b, -c, a}; }  // valid for det = 1
  bool operator==(const Mat2&) const = default;
  std::string str() const;
};

// True iff m is congruent to the identity mod n.
bool in_principal_congruence(const Mat2& m, int n);
// True iff m = [[1,*],[0,1]] mod n.
bool in_gamma1(const Mat2& m, int n);

// Point (x/N, y/N) of (N^{-1}Z/Z)^2, stored as residues mod N.
struct TorsionPoint {
  int x = 0;
  int y = 0;
  int N = 1;

  TorsionPoint() = default;
  TorsionPoint(int x_, int y_, int N_);

  bool is_zero() const { return x == 0 && y == 0; }
  double xr() const { return static_cast<double>(x) / N; }
  double yr() const { return static_cast<double>(y) / N; }

  TorsionPoint operator+(const TorsionPoint& o) const;
  TorsionPoint operator-(const TorsionPoint& o) const;
  TorsionPoint operator-() const;
  auto operator<=>(const TorsionPoint&) const = default;
  std::string str() const;
};

// All N^2 points, row-major in (x, y).
std::vector<TorsionPoint> torsion_group(int N);

// Right action of SL2(Z) on torsion points: the row vector (y x) is
// multiplied by the matrix, so x' = d x + b y and y' = c x + a y.
TorsionPoint torsion_act_right(const TorsionPoint& p, const Mat2& g);

// Level structure: full Gamma(N), Gamma_1(N), or SL2(Z) (level one).
enum class Subgroup { Full, Gamma1, SL2Z };

Subgroup parse_subgroup(const std::string& s);  // "full", "gamma1", "sl2z"
std::string subgroup_name(Subgroup s);
// Whether t_alpha survives for the given level structure. t_0 always does.
bool admits(Subgroup s, const TorsionPoint& a);
// Whether g lies in the congruence subgroup selected by s at level N.
bool in_subgroup(Subgroup s, const Mat2& g, int N);

}  // namespace kzb
