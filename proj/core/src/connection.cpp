#include "kzb/connection.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include <fmt/format.h>

namespace kzb {

namespace {

std::size_t point_index(const TorsionPoint& a) { return static_cast<std::size_t>(a.x * a.N + a.y); }

// ad_X^k t_a for every torsion point a and k <= kmax.
std::vector<std::vector<Series>> ad_x_table(const LieContext& lie, int kmax) {
  std::vector<std::vector<Series>> table;
  const Series X = lie.X();
  for (const auto& a : lie.all_points()) {
    std::vector<Series> row{lie.t(a)};
    for (int k = 1; k <= kmax; ++k) row.push_back(bracket(X, row.back()));
    table.push_back(std::move(row));
  }
  return table;
}

Series t_image(const LieContext& lie, const std::vector<std::vector<Series>>& adx, int m, const TorsionPoint& a,
               const TorsionPoint& b) {
  const Series& plus = adx[point_index(b + a)][static_cast<std::size_t>(m)];
  const Series& minus = adx[point_index(b - a)][static_cast<std::size_t>(m)];
  return bracket(lie.t(b), plus + minus * (m % 2 ? -1.0 : 1.0));
}

Derivation delta_with(const LieContext& lie, const std::vector<std::vector<Series>>& adx, int m, const TorsionPoint& a) {
  if (m < 0) throw std::invalid_argument("delta derivation needs m >= 0");
  const Alphabet& al = lie.alphabet();
  Derivation d(lie.level(), lie.degree());
  // Images of degree >= m + 2 vanish once m + 2 exceeds the truncation.
  if (m + 1 > lie.degree()) return d;
  Series y = lie.zero();
  for (int j = 0; j <= m - 1; ++j) {
    const int k = m - 1 - j;
    for (const auto& b : lie.all_points())
      y += bracket(adx[point_index(b)][static_cast<std::size_t>(j)], adx[point_index(b + a)][static_cast<std::size_t>(k)]) *
           (j % 2 ? -1.0 : 1.0);
  }
  d.set_image(Alphabet::Y, y);
  for (int g = 0; g < al.size(); ++g)
    if (al.is_t(g) && lie.admitted_generator(g)) d.set_image(g, t_image(lie, adx, m, a, al.point(g)));
  return d;
}

Derivation admitted_only(const LieContext& lie, Derivation d) {
  for (int g = 0; g < lie.alphabet().size(); ++g)
    if (!lie.admitted_generator(g)) d.set_image(g, lie.zero());
  return d;
}

std::vector<cplx> exp_coeffs(cplx s, int n) {
  std::vector<cplx> f(static_cast<std::size_t>(n) + 1);
  cplx p = 1.0;
  double fact = 1.0;
  for (int k = 0; k <= n; ++k) {
    if (k) fact *= k;
    f[static_cast<std::size_t>(k)] = p / fact;
    p *= s;
  }
  return f;
}

// Taylor coefficients of 1/(e^x - 1) - 1/x by dividing by (e^x - 1)/x.
std::vector<cplx> inv_expm1_regular(int n) {
  std::vector<double> e(static_cast<std::size_t>(n) + 2);  // (e^x - 1)/x = sum x^k/(k+1)!
  double fact = 1.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    fact *= static_cast<double>(k + 1);
    e[k] = 1.0 / fact;
  }
  // x/(e^x - 1) = sum b_k x^k.
  std::vector<double> b(static_cast<std::size_t>(n) + 2);
  for (std::size_t k = 0; k < b.size(); ++k) {
    double s = k == 0 ? 1.0 : 0.0;
    for (std::size_t i = 1; i <= k; ++i) s -= e[i] * b[k - i];
    b[k] = s;
  }
  // (x/(e^x-1) - 1)/x.
  std::vector<cplx> out(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) out[static_cast<std::size_t>(k)] = b[static_cast<std::size_t>(k) + 1];
  return out;
}

cplx mobius(const Mat2& g, cplx tau) {
  return (static_cast<double>(g.a) * tau + static_cast<double>(g.b)) / (static_cast<double>(g.c) * tau + static_cast<double>(g.d));
}

}  // namespace

// ---------------------------------------------------------------- derivations

Derivation delta_deriv(const LieContext& lie, int m, const TorsionPoint& a) {
  return delta_with(lie, ad_x_table(lie, std::max(m, 0)), m, a);
}

Series delta_t_image(const LieContext& lie, int m, const TorsionPoint& a, const TorsionPoint& b) {
  return t_image(lie, ad_x_table(lie, m), m, a, b);
}

Series delta_consistency_defect(const LieContext& lie, int m, const TorsionPoint& a) {
  const auto adx = ad_x_table(lie, m);
  const Derivation d = delta_with(lie, adx, m, a);
  Series r = d.apply(bracket(lie.X(), lie.Y()));
  for (const auto& b : lie.all_points()) r -= t_image(lie, adx, m, a, b);
  return r;
}

Derivation epsilon_deriv(const LieContext& lie, int m, const TorsionPoint& a) {
  if (m < 2) throw std::invalid_argument("epsilon derivation needs m >= 2");
  const Series u = lie.t(a) + lie.t(-a) * (m % 2 ? -1.0 : 1.0);
  return admitted_only(lie, delta_deriv(lie, m - 2, a) + Derivation::inner(ad_power(lie.X(), u, m - 2)));
}

Derivation y_d_x(const LieContext& lie) {
  Derivation d(lie.level(), lie.degree());
  d.set_image(Alphabet::X, lie.Y());
  return d;
}

// ---------------------------------------------------------------- connection

KZBConnection::KZBConnection(const KZBContext& ctx)
    : ctx_(ctx), lie_(ctx.level, ctx.degree, ctx.subgroup), ydx_(y_d_x(lie_)) {
  if (ctx.degree < 1) throw std::invalid_argument("truncation degree must be positive");
  adx_t_ = ad_x_table(lie_, ctx.degree);
  for (int m = 0; m <= ctx.degree; ++m) {
    std::vector<Derivation> row;
    for (const auto& a : lie_.all_points()) row.push_back(delta_with(lie_, adx_t_, m, a));
    delta_.push_back(std::move(row));
  }
}

const Series& KZBConnection::ad_x_t(const TorsionPoint& a, int k) const {
  return adx_t_.at(point_index(a)).at(static_cast<std::size_t>(k));
}

const Derivation& KZBConnection::delta(int m, const TorsionPoint& a) const {
  return delta_.at(static_cast<std::size_t>(m)).at(point_index(a));
}

Series KZBConnection::t_sum(const std::vector<XLaurent>& f) const {
  Series s = lie_.zero();
  const auto& pts = lie_.all_points();
  for (std::size_t i = 0; i < pts.size() && i < f.size(); ++i) {
    if (!admits(ctx_.subgroup, pts[i])) continue;
    if (f[i].residue() != cplx(0)) throw PoleError(-1, f[i].residue());
    for (int k = 0; k <= std::min(f[i].D, ctx_.degree); ++k)
      if (f[i].at(k) != cplx(0)) s += adx_t_[i][static_cast<std::size_t>(k)] * f[i].at(k);
  }
  return s;
}

int KZBConnection::q_for(cplx tau) const { return std::max(ctx_.qorder, auto_qorder(tau, 1, ctx_.degree + 4)); }

ConnectionValue KZBConnection::omega(cplx tau, cplx z) const {
  if (tau.imag() <= 0) throw std::invalid_argument("tau must lie in the upper half plane");
  const int D = ctx_.degree;
  const int Q = q_for(tau);
  const auto& pts = lie_.all_points();
  std::vector<XLaurent> h(pts.size()), g(pts.size());
  Derivation A = ydx_ * kTwoPiI;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!admits(ctx_.subgroup, pts[i])) continue;
    const CoefficientSeries cs = h_g_series(pts[i], z, tau, D, Q);
    h[i] = cs.h;
    g[i] = cs.g;
    const auto Am = A_coeffs(D, pts[i], tau, Q);
    for (int m = 0; m <= D; ++m) A += delta_[static_cast<std::size_t>(m)][i] * (0.5 * Am[static_cast<std::size_t>(m)]);
  }
  const Series b = lie_.Y() * kTwoPiI + t_sum(h);
  A += Derivation::inner(t_sum(g));
  return {admitted_only(lie_, A), admitted_only(lie_, Derivation::inner(b)), b};
}

Series KZBConnection::dz_element(cplx tau, cplx z) const {
  if (tau.imag() <= 0) throw std::invalid_argument("tau must lie in the upper half plane");
  const int Q = q_for(tau);
  const auto& pts = lie_.all_points();
  std::vector<XLaurent> h(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (admits(ctx_.subgroup, pts[i])) h[i] = h_g_series(pts[i], z, tau, ctx_.degree, Q).h;
  return lie_.Y() * kTwoPiI + t_sum(h);
}

Curvature KZBConnection::curvature(cplx tau, cplx z) const {
  const int D = ctx_.degree;
  const int Q = q_for(tau);
  const auto& pts = lie_.all_points();
  std::vector<XLaurent> ht(pts.size()), gz(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!admits(ctx_.subgroup, pts[i])) continue;
    const CoefficientSeries cs = h_g_series(pts[i], z, tau, D, Q);
    ht[i] = cs.h_tau;
    gz[i] = cs.g_z;
  }
  const ConnectionValue w = omega(tau, z);
  Curvature c;
  c.exactness = admitted_only(lie_, Derivation::inner(t_sum(ht) - t_sum(gz)));
  c.wedge = admitted_only(lie_, commutator(w.A, w.B));
  c.total = c.exactness + c.wedge;
  return c;
}

FactorOfAutomorphy KZBConnection::automorphy(const Mat2& g, int m, int n, cplx tau, cplx z) const {
  const int N = ctx_.level;
  if (!in_subgroup(ctx_.subgroup, g, N))
    throw std::invalid_argument(fmt::format("{} is not in the selected subgroup {}", g.str(), subgroup_name(ctx_.subgroup)));
  const double c = static_cast<double>(g.c);
  const cplx j = c * tau + static_cast<double>(g.d);
  const cplx zs = z + static_cast<double>(m) * tau + static_cast<double>(n);
  const Series X = lie_.X(), Y = lie_.Y();

  Automorphism M(N, ctx_.degree), Minv(N, ctx_.degree);
  M.set_image(Alphabet::X, X * j);
  M.set_image(Alphabet::Y, Y * (1.0 / j) + X * (c / kTwoPiI));
  Minv.set_image(Alphabet::X, X * (1.0 / j));
  Minv.set_image(Alphabet::Y, Y * j - X * (c / kTwoPiI));
  for (int gi = 0; gi < lie_.alphabet().size(); ++gi)
    if (lie_.alphabet().is_t(gi)) {
      M.set_image(gi, lie_.gen(gi));
      Minv.set_image(gi, lie_.gen(gi));
    }
  // M~_gamma(tau, z) = M_gamma o exp((c z / j) ad_X) = exp(c z ad_X) o M_gamma,
  // composed with the translation factor exp(-m ad_X).
  const Automorphism E = Automorphism::exp_ad(X * (c * zs));
  const Automorphism Einv = Automorphism::exp_ad(X * (-c * zs));
  const Automorphism T = Automorphism::exp_ad(X * static_cast<double>(-m));
  const Automorphism Tinv = Automorphism::exp_ad(X * static_cast<double>(m));

  FactorOfAutomorphy f;
  f.map = E.after(M).after(T);
  f.inverse = Tinv.after(Minv).after(Einv);

  Derivation scale(N, ctx_.degree);
  scale.set_image(Alphabet::X, X * (c / j));
  scale.set_image(Alphabet::Y, Y * (-c / j) - X * (c * c / kTwoPiI));
  const Derivation adX = admitted_only(lie_, Derivation::inner(X));
  f.d_z = adX * c;
  f.d_tau = scale + adX * (-c * c * zs / j + static_cast<double>(m) * c);
  return f;
}

FormResidual KZBConnection::automorphy_log_derivative_numeric(const Mat2& g, int m, int n, cplx tau, cplx z) const {
  const double h = 1e-6 * (1.0 + std::abs(tau));
  const FactorOfAutomorphy f = automorphy(g, m, n, tau, z);
  auto derivative = [&](cplx dtau, cplx dz) {
    const FactorOfAutomorphy p = automorphy(g, m, n, tau + dtau, z + dz);
    const FactorOfAutomorphy q = automorphy(g, m, n, tau - dtau, z - dz);
    std::vector<Series> dimg;
    for (int gi = 0; gi < lie_.alphabet().size(); ++gi) dimg.push_back((p.map.image(gi) - q.map.image(gi)) * (0.5 / h));
    Derivation d(ctx_.level, ctx_.degree);
    for (int gi = 0; gi < lie_.alphabet().size(); ++gi)
      d.set_image(gi, apply_twisted(f.map, dimg, f.inverse.image(gi)));
    return admitted_only(lie_, d);
  };
  return {derivative(h, 0.0), derivative(0.0, h)};
}

FormResidual KZBConnection::invariance_residual(const Mat2& g, int m, int n, cplx tau, cplx z) const {
  const double c = static_cast<double>(g.c);
  const cplx j = c * tau + static_cast<double>(g.d);
  const cplx zs = z + static_cast<double>(m) * tau + static_cast<double>(n);
  const FactorOfAutomorphy f = automorphy(g, m, n, tau, z);
  const ConnectionValue moved = omega(mobius(g, tau), zs / j);
  const ConnectionValue here = omega(tau, z);

  // Pullback: dtau' = dtau / j^2, dz' = dz / j + (m / j - c zs / j^2) dtau.
  const Derivation pull_tau = moved.A * (1.0 / (j * j)) + moved.B * (static_cast<double>(m) / j - c * zs / (j * j));
  const Derivation pull_z = moved.B * (1.0 / j);

  FormResidual r;
  r.dtau = admitted_only(lie_, pull_tau - conjugate(f.map, here.A, f.inverse) + f.d_tau);
  r.dz = admitted_only(lie_, pull_z - conjugate(f.map, here.B, f.inverse) + f.d_z);
  return r;
}

std::vector<Mat2> subgroup_generators(Subgroup s, int N) {
  const Mat2 S{0, -1, 1, 0}, T{1, 1, 0, 1};
  const Mat2 I{1, 0, 0, 1};
  std::vector<Mat2> reps{I};
  std::deque<std::size_t> queue{0};
  std::vector<Mat2> gens;
  auto add = [&](const Mat2& h) {
    if (h == I) return;
    const Mat2 hi = h.inverse();
    for (const auto& e : gens)
      if (e == h || e == hi) return;
    gens.push_back(h);
  };
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    for (const Mat2& step : {S, T}) {
      const Mat2 rs = reps[i] * step;
      bool found = false;
      for (const auto& r : reps)
        if (in_subgroup(s, rs * r.inverse(), N)) {
          add(rs * r.inverse());
          found = true;
          break;
        }
      if (!found) {
        reps.push_back(rs);
        queue.push_back(reps.size() - 1);
      }
    }
  }
  return gens;
}

// ---------------------------------------------------------------- restrictions

ZeroSectionRestriction restrict_zero_section(const KZBConnection& conn, cplx tau) {
  const LieContext& lie = conn.lie();
  const int D = lie.degree();
  Derivation d = y_d_x(lie) * kTwoPiI;
  for (int m = 2; m <= D + 2; ++m)
    for (const auto& a : lie.points()) {
      const cplx G = eisenstein(m, a, tau);
      if (G == cplx(0)) continue;
      const Series u = lie.t(a) + lie.t(-a) * (m % 2 ? -1.0 : 1.0);
      const Derivation eps = conn.delta(m - 2, a) + Derivation::inner(ad_power(lie.X(), u, m - 2));
      d -= eps * (0.5 * static_cast<double>(m - 1) / std::pow(kTwoPiI, m - 1) * G);
    }
  return {admitted_only(lie, d), lie.t({0, 0, lie.level()})};
}

Series residue_torsion(const LieContext& lie, const TorsionPoint& a) {
  return adjoint_series_action(exp_coeffs(-a.yr(), lie.degree()), lie.X(), lie.t(a));
}

namespace {

int cusp_width(const LieContext& lie, const Mat2& gamma) {
  const Mat2 gi = gamma.inverse();
  const Mat2 minus{-1, 0, 0, -1};
  for (int h = 1;; ++h) {
    const Mat2 p = gamma * Mat2{1, h, 0, 1} * gi;
    if (in_subgroup(lie.subgroup(), p, lie.level()) || in_subgroup(lie.subgroup(), minus * p, lie.level())) return h;
  }
}

}  // namespace

Derivation residue_cusp(const LieContext& lie, const Mat2& gamma, bool half) {
  if (gamma.det() != 1) throw std::invalid_argument("cusp representative must be in SL2(Z)");
  const int D = lie.degree();
  const auto adx = ad_x_table(lie, D);
  const Mat2 gi = gamma.inverse();
  Derivation d = y_d_x(lie);
  const double s = half ? 0.5 : 1.0;
  for (int m = 0; m <= D; ++m) {
    const double fact = std::tgamma(m + 1.0) * (m + 2);
    for (const auto& a : lie.all_points()) {
      const double B = bernoulli_eval(m + 2, a.yr());
      if (B == 0.0) continue;
      const TorsionPoint b = torsion_act_right(a, gi);
      const Series u = lie.t(b) + lie.t(-b) * (m % 2 ? -1.0 : 1.0);
      const Derivation eps = delta_with(lie, adx, m, b) + Derivation::inner(ad_power(lie.X(), u, m));
      d += eps * (s * (m % 2 ? -1.0 : 1.0) * B / fact);
    }
  }
  return admitted_only(lie, d * static_cast<double>(cusp_width(lie, gamma)));
}

Series FiberRestriction::at(cplx w) const {
  Series s = log_part * (1.0 / w);
  const int N = static_cast<int>(pole.size());
  for (int k = 0; k < N; ++k)
    s += pole[static_cast<std::size_t>(k)] * (1.0 / (w - std::exp(kTwoPiI * static_cast<double>(k) / static_cast<double>(N))));
  return s;
}

FiberRestriction restrict_singular_fiber(const LieContext& lie) {
  const int N = lie.level();
  const int D = lie.degree();
  // q^0 Fourier term of F without the w-dependent coth: pi i coth(x/2).
  const XLaurent cothx = F_xseries(0.0, D, 0, FPart::Value, false).evaluate(cplx(0, 1));
  XLaurent pole_part(D);
  pole_part.c[0] = kTwoPiI;
  const cplx pii(0, kPi);

  FiberRestriction r;
  r.dq = residue_cusp(lie, {1, 0, 0, 1}, true);
  r.pole.assign(static_cast<std::size_t>(N), lie.zero());
  Series sum = lie.zero();
  for (const auto& a : lie.points()) {
    // Limits of h_a as q_N -> 0 with w = e^{2 pi i z} fixed:
    //   y = 0:  pi i coth(x/2) - pi i + 2 pi i w/(w - zeta^x) - 2 pi i / x
    //   y != 0: e^{-y x} (pi i coth(x/2) + pi i) - 2 pi i / x
    XLaurent c(D);
    if (a.y == 0) {
      c = cothx;
      c.at(0) -= pii;
      c -= pole_part;
      r.pole[static_cast<std::size_t>(a.x)] += lie.t(a);
    } else {
      XLaurent f = cothx;
      f.at(0) += pii;
      c = f.times_exp(-a.yr()) - pole_part;
    }
    std::vector<cplx> coeffs(static_cast<std::size_t>(D) + 1);
    for (int k = 0; k <= D; ++k) coeffs[static_cast<std::size_t>(k)] = c.at(k) / kTwoPiI;
    sum += adjoint_series_action(coeffs, lie.X(), lie.t(a));
  }
  // dz = dw / (2 pi i w); the 2 pi i Y term and the w-independent parts go to dw/w.
  r.log_part = lie.Y() + sum;
  return r;
}

std::vector<cplx> kz_form(int N, cplx w) {
  std::vector<cplx> c{1.0 / w};
  for (int k = 0; k < N; ++k) c.push_back(1.0 / (w - std::exp(kTwoPiI * static_cast<double>(k) / static_cast<double>(N))));
  return c;
}

Series kz_substitute(const LieContext& lie, int j) {
  const int N = lie.level();
  const int D = lie.degree();
  if (j < 0 || j > N) throw std::out_of_range("KZ generator index out of range");
  if (j > 0) return lie.t({j - 1, 0, N});
  // e_0 -> sum_a e^{-y X}/(e^X - 1) . t_a + sum_{y != 0} e^{-y X} . t_a; the
  // 1/X parts sum to (1/ad_X)[X, Y] = Y.
  const auto reg = inv_expm1_regular(D);
  Series s = lie.Y();
  for (const auto& a : lie.points()) {
    const auto e = exp_coeffs(-a.yr(), D + 1);
    std::vector<cplx> f(static_cast<std::size_t>(D) + 1);
    // e^{-y x}/(e^x - 1) - 1/x = e^{-y x} (1/(e^x - 1) - 1/x) + (e^{-y x} - 1)/x.
    for (int k = 0; k <= D; ++k) {
      cplx v = 0.0;
      for (int i = 0; i <= k; ++i) v += e[static_cast<std::size_t>(i)] * reg[static_cast<std::size_t>(k - i)];
      v += e[static_cast<std::size_t>(k + 1)];
      if (a.y != 0) v += e[static_cast<std::size_t>(k)];
      f[static_cast<std::size_t>(k)] = v;
    }
    s += adjoint_series_action(f, lie.X(), lie.t(a));
  }
  return s;
}

CheckResult degeneration_check(const LieContext& lie) {
  const FiberRestriction r = restrict_singular_fiber(lie);
  double worst = distance(r.log_part, kz_substitute(lie, 0));
  std::string where = "e_0";
  for (int k = 0; k < lie.level(); ++k) {
    const double d = distance(r.pole[static_cast<std::size_t>(k)], kz_substitute(lie, k + 1));
    if (d > worst) {
      worst = d;
      where = fmt::format("e_{}", k + 1);
    }
  }
  return make_check("degeneration",
                    {{"N", std::to_string(lie.level())},
                     {"D", std::to_string(lie.degree())},
                     {"subgroup", subgroup_name(lie.subgroup())}},
                    worst, 1e-12, fmt::format("largest coefficient mismatch at {}", where));
}

}  // namespace kzb
