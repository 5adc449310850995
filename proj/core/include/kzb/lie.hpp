#pragma once

#include <stdexcept>
#include <vector>

#include "kzb/series.hpp"
#include "kzb/torsion.hpp"

namespace kzb {

Series bracket(const Series& a, const Series& b);
// ad_x^n(v).
Series ad_power(const Series& x, const Series& v, int n);

// exp of a series with zero constant term.
Series exp_series(const Series& a);
// log of a series with constant term 1.
Series log_series(const Series& g);
// log(exp(a) exp(b)).
Series bch(const Series& a, const Series& b);

// Left-normed bracketing of each word, extended linearly.
Series dynkin(const Series& a);
// Max over degrees n >= 1 of |dynkin(a_n) - n a_n|; a Lie element gives 0
// (up to rounding). A nonzero constant term counts as a defect.
double lie_defect(const Series& a);
bool is_lie(const Series& a, double tol = 1e-9);

// Power series sum_{n >= lowest} c[n - lowest] u^n with possibly negative lowest order.
struct LaurentCoeffs {
  int lowest = 0;
  std::vector<cplx> c;

  cplx at(int n) const {
    const int i = n - lowest;
    return (i >= 0 && i < static_cast<int>(c.size())) ? c[static_cast<std::size_t>(i)] : cplx{};
  }
};

class PoleError : public std::domain_error {
 public:
  PoleError(int order, cplx coefficient);
  int order;
  cplx coefficient;
};

// sum_n f_n ad_x^n(v). Throws PoleError if f has a nonzero negative-order term.
Series adjoint_series_action(const LaurentCoeffs& f, const Series& x, const Series& v);
Series adjoint_series_action(const std::vector<cplx>& f, const Series& x, const Series& v);

// Fiber generators with the level structure applied: t_alpha is the free
// generator for admitted alpha != 0, zero for non-admitted alpha, and
// t_0 = [X, Y] - sum of the admitted t_alpha with alpha != 0.
class LieContext {
 public:
  LieContext(int level, int degree, Subgroup subgroup = Subgroup::Full);

  int level() const { return N_; }
  int degree() const { return D_; }
  Subgroup subgroup() const { return sub_; }
  const Alphabet& alphabet() const { return al_; }

  Series zero() const { return Series(N_, D_); }
  Series one() const { return Series::unit(N_, D_); }
  Series X() const { return Series::generator(N_, D_, Alphabet::X); }
  Series Y() const { return Series::generator(N_, D_, Alphabet::Y); }
  Series t(const TorsionPoint& a) const;
  Series gen(int g) const;  // zero for non-admitted T generators
  bool admitted_generator(int g) const;
  // Torsion points whose t_alpha is nonzero (including 0).
  const std::vector<TorsionPoint>& points() const { return points_; }
  const std::vector<TorsionPoint>& all_points() const { return all_; }

 private:
  int N_;
  int D_;
  Subgroup sub_;
  Alphabet al_;
  std::vector<TorsionPoint> all_;
  std::vector<TorsionPoint> points_;
  Series t0_;
};

// t_0 = [X, Y] - sum_{alpha != 0} t_alpha for the full level structure.
Series resolve_t0(int level, int degree);

}  // namespace kzb
