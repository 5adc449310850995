#include "kzb/lie.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace kzb {

Series bracket(const Series& a, const Series& b) { return a * b - b * a; }

Series ad_power(const Series& x, const Series& v, int n) {
  Series r = v;
  for (int i = 0; i < n && !r.is_zero(); ++i) r = bracket(x, r);
  return r;
}

Series exp_series(const Series& a) {
  if (std::abs(a.constant()) > 0.0) throw std::invalid_argument("exp needs a series with zero constant term");
  Series result = Series::unit(a.level(), a.degree());
  Series power = result;
  for (int k = 1; k <= a.degree(); ++k) {
    power = power * a;
    if (power.is_zero()) break;
    result += power * cplx(1.0 / std::tgamma(k + 1.0));
  }
  return result;
}

Series log_series(const Series& g) {
  if (std::abs(g.constant() - 1.0) > 1e-12) throw std::invalid_argument("log needs a series with constant term 1");
  const Series x = g - Series::unit(g.level(), g.degree(), g.constant());
  Series result(g.level(), g.degree());
  Series power = Series::unit(g.level(), g.degree());
  for (int k = 1; k <= g.degree(); ++k) {
    power = power * x;
    if (power.is_zero()) break;
    result += power * cplx((k % 2 ? 1.0 : -1.0) / k);
  }
  return result;
}

Series bch(const Series& a, const Series& b) {
  a.check_compatible(b);
  return log_series(exp_series(a) * exp_series(b));
}

Series dynkin(const Series& a) {
  std::vector<Series::Term> out;
  std::vector<std::pair<Word, double>> cur, next;
  for (const auto& [w, c] : a.terms()) {
    const int n = w.length();
    if (n == 0) continue;
    cur.assign(1, {Word::letter(w[0]), 1.0});
    for (int i = 1; i < n; ++i) {
      const Word l = Word::letter(w[i]);
      next.clear();
      for (const auto& [u, s] : cur) {
        next.emplace_back(u * l, s);
        next.emplace_back(l * u, -s);
      }
      std::swap(cur, next);
    }
    for (const auto& [u, s] : cur) out.emplace_back(u, c * s);
  }
  return Series::from_terms(a.level(), a.degree(), std::move(out));
}

double lie_defect(const Series& a) {
  double defect = std::abs(a.constant());
  const Series d = dynkin(a);
  for (int n = 1; n <= a.degree(); ++n) {
    const Series an = a.homogeneous(n);
    defect = std::max(defect, distance(d.homogeneous(n), an * cplx(n)));
  }
  return defect;
}

bool is_lie(const Series& a, double tol) { return lie_defect(a) <= tol; }

PoleError::PoleError(int order_, cplx coefficient_)
    : std::domain_error(fmt::format("adjoint series action has a pole: order {} coefficient ({}, {})", order_,
                                    coefficient_.real(), coefficient_.imag())),
      order(order_),
      coefficient(coefficient_) {}

Series adjoint_series_action(const LaurentCoeffs& f, const Series& x, const Series& v) {
  for (int n = f.lowest; n < 0; ++n)
    if (f.at(n) != 0.0) throw PoleError(n, f.at(n));
  x.check_compatible(v);
  Series result(v.level(), v.degree());
  Series term = v;
  const int top = f.lowest + static_cast<int>(f.c.size()) - 1;
  for (int n = 0; n <= top && !term.is_zero(); ++n) {
    if (f.at(n) != 0.0) result += term * f.at(n);
    if (n < top) term = bracket(x, term);
  }
  return result;
}

Series adjoint_series_action(const std::vector<cplx>& f, const Series& x, const Series& v) {
  return adjoint_series_action(LaurentCoeffs{0, f}, x, v);
}

LieContext::LieContext(int level, int degree, Subgroup subgroup)
    : N_(level), D_(degree), sub_(subgroup), al_(level), all_(torsion_group(level)), t0_(level, degree) {
  Series sum(N_, D_);
  for (const auto& a : all_) {
    if (!admits(sub_, a)) continue;
    points_.push_back(a);
    if (!a.is_zero()) sum += Series::generator(N_, D_, al_.t(a));
  }
  t0_ = bracket(X(), Y()) - sum;
}

Series LieContext::t(const TorsionPoint& a) const {
  if (a.N != N_) throw std::invalid_argument("torsion level mismatch");
  if (a.is_zero()) return t0_;
  if (!admits(sub_, a)) return zero();
  return Series::generator(N_, D_, al_.t(a));
}

bool LieContext::admitted_generator(int g) const { return !al_.is_t(g) || admits(sub_, al_.point(g)); }

Series LieContext::gen(int g) const {
  if (!admitted_generator(g)) return zero();
  return Series::generator(N_, D_, g);
}

Series resolve_t0(int level, int degree) { return LieContext(level, degree).t({0, 0, level}); }

}  // namespace kzb
