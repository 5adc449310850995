#include "kzb/special.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include <fmt/format.h>

namespace kzb {

namespace {

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

double to_double(const Rational& r) { return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator()); }

int mod(int v, int n) {
  const int r = v % n;
  return r < 0 ? r + n : r;
}

cplx ipow(cplx z, int m) {
  cplx r = 1.0;
  for (int i = 0; i < m; ++i) r *= z;
  return r;
}

}  // namespace

// ---------------------------------------------------------------- Bernoulli

Rational bernoulli_number(int m) {
  if (m < 0) throw std::invalid_argument("negative Bernoulli index");
  if (m > 30) throw std::invalid_argument("Bernoulli index too large for 64-bit rationals");
  static std::vector<Rational> table;
  static std::mutex lock;
  std::lock_guard<std::mutex> guard(lock);
  while (static_cast<int>(table.size()) <= m) {
    const int n = static_cast<int>(table.size());
    if (n == 0) {
      table.emplace_back(1);
      continue;
    }
    Rational s(0);
    for (int k = 0; k < n; ++k) s += Rational(binomial(n + 1, k)) * table[static_cast<std::size_t>(k)];
    table.push_back(-s / Rational(n + 1));
  }
  return table[static_cast<std::size_t>(m)];
}

std::vector<Rational> bernoulli_poly(int m) {
  if (m < 0) throw std::invalid_argument("negative Bernoulli index");
  std::vector<Rational> c(static_cast<std::size_t>(m) + 1);
  for (int k = 0; k <= m; ++k) c[static_cast<std::size_t>(k)] = Rational(binomial(m, k)) * bernoulli_number(m - k);
  return c;
}

double bernoulli_eval(int m, double x) {
  const auto c = bernoulli_poly(m);
  double r = 0.0;
  for (int k = m; k >= 0; --k) r = r * x + to_double(c[static_cast<std::size_t>(k)]);
  return r;
}

double zeta_value(int m) {
  if (m < 2) throw std::invalid_argument("zeta(m) needs m >= 2");
  constexpr int M = 100;
  double s = 0.0;
  for (int n = M - 1; n >= 1; --n) s += std::pow(static_cast<double>(n), -m);
  const double Md = M;
  double tail = std::pow(Md, 1 - m) / (m - 1) + 0.5 * std::pow(Md, -m);
  for (int j = 1; j <= 6; ++j) {
    double rising = 1.0;
    for (int i = 0; i < 2 * j - 1; ++i) rising *= m + i;
    tail += to_double(bernoulli_number(2 * j)) / factorial(2 * j) * rising * std::pow(Md, -m - 2 * j + 1);
  }
  return s + tail;
}

// ---------------------------------------------------------------- q-series

cplx nome(cplx tau, int N) { return std::exp(kTwoPiI * tau / static_cast<double>(N)); }

QSeries::Value QSeries::evaluate(cplx tau) const {
  const cplx q = nome(tau, N);
  cplx v = 0.0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) v = v * q + *it;
  // Geometric tail from the size of the last terms; the ratio is at least
  // |q_N| and is estimated from the decay over the last three terms.
  const double aq = std::abs(q);
  const int Q = order();
  auto term = [&](int n) { return std::abs(a[static_cast<std::size_t>(n)]) * std::pow(aq, n); };
  double last = 0.0;
  for (int n = std::max(0, Q - 2); n <= Q; ++n) last = std::max(last, term(n));
  double ratio = aq;
  if (Q >= 4 && term(Q - 3) > 0.0) ratio = std::max(ratio, std::cbrt(std::max(term(Q), term(Q - 1)) / term(Q - 3)));
  const double tail = ratio < 1.0 ? last * ratio / (1.0 - ratio) : INFINITY;
  return {v, tail};
}

QSeries QSeries::dtau() const {
  QSeries r = *this;
  for (std::size_t n = 0; n < r.a.size(); ++n) r.a[n] *= kTwoPiI * static_cast<double>(n) / static_cast<double>(N);
  return r;
}

std::string QSeries::to_text() const {
  std::string out = fmt::format("qseries {} {}\n", N, order());
  for (std::size_t n = 0; n < a.size(); ++n) out += fmt::format("{} {:.17g} {:.17g}\n", n, a[n].real(), a[n].imag());
  return out;
}

QSeries QSeries::from_text(const std::string& text) {
  std::istringstream in(text);
  std::string tag;
  int N = 0, Q = -1;
  if (!(in >> tag >> N >> Q) || tag != "qseries" || N < 1 || Q < 0)
    throw std::invalid_argument("malformed q-series header");
  QSeries s;
  s.N = N;
  s.a.resize(static_cast<std::size_t>(Q) + 1);
  for (int i = 0; i <= Q; ++i) {
    int n = 0;
    double re = 0, im = 0;
    if (!(in >> n >> re >> im) || n != i) throw std::invalid_argument("malformed q-series coefficient line");
    s.a[static_cast<std::size_t>(n)] = {re, im};
  }
  return s;
}

// ---------------------------------------------------------------- Eisenstein

cplx eisenstein_cusp_value(int m, const TorsionPoint& a) {
  return -ipow(-kTwoPiI, m) * bernoulli_eval(m, a.yr()) / factorial(m);
}

LatticeSum eisenstein_lattice(int m, const TorsionPoint& a, cplx tau, int K) {
  if (m < 2) throw std::invalid_argument("Eisenstein weight must be at least 2");
  if (tau.imag() <= 0) throw std::invalid_argument("tau must lie in the upper half plane");
  if (m == 2) {
    if (a.is_zero()) throw std::domain_error("G_2 at alpha = 0 is only conditionally convergent; use the q-expansion");
    const cplx v = eisenstein(2, a, tau);
    return {v, v, 0.0, 0, "qexp"};
  }
  const int N = a.N;
  std::vector<cplx> phk(static_cast<std::size_t>(N)), phl(static_cast<std::size_t>(N));
  for (int r = 0; r < N; ++r) {
    phk[static_cast<std::size_t>(r)] = std::exp(kTwoPiI * static_cast<double>(r * a.x) / static_cast<double>(N));
    phl[static_cast<std::size_t>(r)] = std::exp(-kTwoPiI * static_cast<double>(r * a.y) / static_cast<double>(N));
  }
  auto term = [&](int k, int l) {
    const cplx w = static_cast<double>(k) * tau + static_cast<double>(l);
    return phk[static_cast<std::size_t>(mod(k, N))] * phl[static_cast<std::size_t>(mod(l, N))] / ipow(w, m);
  };
  const int K0 = (K / (8 * N)) * 8 * N;
  const bool extrapolate = K0 >= 8 * N;
  const int Kmax = extrapolate ? K0 : K;
  std::vector<cplx> partial;  // at Kmax/8, Kmax/4, Kmax/2, Kmax
  cplx total = 0.0;
  for (int r = 1; r <= Kmax; ++r) {
    cplx shell = 0.0;
    for (int k = -r; k <= r; ++k) shell += term(k, r) + term(k, -r);
    for (int l = -r + 1; l <= r - 1; ++l) shell += term(r, l) + term(-r, l);
    total += shell;
    if (extrapolate && (r == Kmax / 8 || r == Kmax / 4 || r == Kmax / 2)) partial.push_back(total);
  }
  if (!extrapolate) return {total, total, INFINITY, Kmax, "plain"};
  partial.push_back(total);
  std::vector<cplx> v(partial.rbegin(), partial.rend());  // K0, K0/2, K0/4, K0/8
  cplx previous = v[0];
  for (int p : {2, 3, 4}) {
    const double f = std::ldexp(1.0, p);
    previous = v[0];
    for (std::size_t i = 0; i + 1 < v.size(); ++i) v[i] = (f * v[i] - v[i + 1]) / (f - 1.0);
    v.pop_back();
  }
  return {v[0], total, std::abs(v[0] - previous), K0, "richardson"};
}

QSeries eisenstein_qexp(int m, int N, int k, int Q) {
  if (m < 2) throw std::invalid_argument("Eisenstein weight must be at least 2");
  if (N < 1 || Q < 0) throw std::invalid_argument("bad level or order");
  const cplx zeta = std::exp(kTwoPiI * static_cast<double>(mod(k, N)) / static_cast<double>(N));
  QSeries s;
  s.N = 1;
  s.a.assign(static_cast<std::size_t>(Q) + 1, 0.0);
  s.a[0] = (1.0 + (m % 2 ? -1.0 : 1.0)) * zeta_value(m);
  const cplx pre = ipow(-kTwoPiI, m) / (std::pow(static_cast<double>(N), m) * factorial(m - 1));
  const double sgn_m = m % 2 ? -1.0 : 1.0;
  for (int n = 1; n <= Q; ++n) {
    cplx t = 0.0;
    for (int d = 1; d <= n; ++d)
      if (n % d == 0) t += std::pow(static_cast<double>(d), m - 1) * (1.0 + sgn_m);
    const int nN = n * N;
    for (int d = 1; d <= nN; ++d) {
      if (nN % d) continue;
      const double dm = std::pow(static_cast<double>(d), m - 1);
      // Positive divisor d and negative divisor -d: sgn(d) d^{m-1} is dm and sgn_m dm.
      for (int sign : {1, -1}) {
        const int kk = mod(sign * (nN / d), N);
        const double weight = sign > 0 ? dm : sgn_m * dm;
        for (int l = 0; l < N; ++l) {
          if (kk == 0 && l == 0) continue;
          t += ipow(zeta, kk) * weight *
               std::exp(kTwoPiI * static_cast<double>(l) * static_cast<double>(sign * d) / static_cast<double>(N));
        }
      }
    }
    s.a[static_cast<std::size_t>(n)] = pre * t;
  }
  return s;
}

QSeries eisenstein_qN(int m, const TorsionPoint& a, int Q) {
  if (m < 2) throw std::invalid_argument("Eisenstein weight must be at least 2");
  const int N = a.N;
  QSeries s;
  s.N = N;
  s.a.assign(static_cast<std::size_t>(Q) + 1, 0.0);
  s.a[0] = eisenstein_cusp_value(m, a);
  const cplx pre = ipow(-kTwoPiI, m) / (factorial(m - 1) * std::pow(static_cast<double>(N), m - 1));
  const double sgn_m = m % 2 ? -1.0 : 1.0;
  for (int n = 1; n <= Q; ++n) {
    cplx t = 0.0;
    for (int k = 1; k <= n; ++k) {
      if (n % k) continue;
      const int u = n / k;
      const double um = std::pow(static_cast<double>(u), m - 1);
      const cplx ph = std::exp(kTwoPiI * static_cast<double>(k) * a.xr());
      if (mod(u - a.y, N) == 0) t += um * ph;
      if (mod(u + a.y, N) == 0) t += sgn_m * um * std::conj(ph);
    }
    s.a[static_cast<std::size_t>(n)] = pre * t;
  }
  return s;
}

int auto_qorder(cplx tau, int N, int p, double eps) {
  if (tau.imag() <= 0) throw std::invalid_argument("tau must lie in the upper half plane");
  const double lq = 2.0 * kPi * tau.imag() / N;  // -log |q_N|
  for (int n = 1; n < 20000; ++n)
    if (-0.5 * lq * n + p * std::log(static_cast<double>(n)) < std::log(eps) && n > 2 * p / (0.5 * lq)) return n;
  throw std::domain_error("tau too close to the real axis for a q-expansion");
}

cplx eisenstein(int m, const TorsionPoint& a, cplx tau) {
  const int Q = auto_qorder(tau, a.N, m + 1);
  return eisenstein_qN(m, a, Q).evaluate(tau).value;
}

cplx eisenstein_normalized(int m, int N, int k, cplx tau) {
  const cplx zeta = std::exp(kTwoPiI * static_cast<double>(mod(k, N)) / static_cast<double>(N));
  const cplx denom = std::conj(zeta) + (m % 2 ? -1.0 : 1.0) * zeta;
  if (std::abs(denom) < 1e-12) throw std::domain_error("normalized Eisenstein series undefined for this weight and root of unity");
  return factorial(m - 1) / ipow(kTwoPiI, m) / denom * eisenstein(m, TorsionPoint(k, 0, N), tau);
}

// ---------------------------------------------------------------- theta / F

namespace {

struct ThetaValue {
  cplx value;
  double scale;  // largest term modulus
};

ThetaValue theta_scaled(cplx u, cplx tau, bool derivative) {
  if (tau.imag() <= 0) throw std::invalid_argument("tau must lie in the upper half plane");
  const double center = u.real() / (2.0 * kPi * tau.imag());
  const double width = std::sqrt(50.0 / (kPi * tau.imag())) + 3.0;
  const long lo = static_cast<long>(std::floor(center - width)) - 1;
  const long hi = static_cast<long>(std::ceil(center + width)) + 1;
  cplx s = 0.0;
  double scale = 0.0;
  for (long n = lo; n <= hi; ++n) {
    const double h = static_cast<double>(n) + 0.5;
    cplx t = std::exp(cplx(0.0, kPi) * tau * h * h + u * h);
    if (n % 2) t = -t;
    if (derivative) t *= h;
    scale = std::max(scale, std::abs(t));
    s += t;
  }
  return {s, scale};
}

}  // namespace

cplx theta(cplx u, cplx tau) { return theta_scaled(u, tau, false).value; }

cplx theta_prime0(cplx tau) { return theta_scaled(0.0, tau, true).value; }

cplx F_numeric(cplx x, cplx z, cplx tau) {
  const cplx v = kTwoPiI * z;
  const ThetaValue tx = theta_scaled(x, tau, false);
  const ThetaValue tv = theta_scaled(v, tau, false);
  if (std::abs(tx.value) < 1e-9 * tx.scale)
    throw PoleProximity(fmt::format("F pole: x = ({}, {}) is near the lattice 2 pi i (Z + tau Z)", x.real(), x.imag()));
  if (std::abs(tv.value) < 1e-9 * tv.scale)
    throw PoleProximity(fmt::format("F pole: z = ({}, {}) is near the lattice Z + tau Z", z.real(), z.imag()));
  return kTwoPiI * theta_prime0(tau) * theta(x + v, tau) / (tx.value * tv.value);
}

cplx XLaurent::evaluate(cplx x) const {
  cplx v = 0.0;
  for (int k = D; k >= 0; --k) v = v * x + at(k);
  return v + residue() / x;
}

XLaurent& XLaurent::operator+=(const XLaurent& o) {
  if (o.D != D) throw std::invalid_argument("Laurent order mismatch");
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
  tail += o.tail;
  return *this;
}

XLaurent& XLaurent::operator-=(const XLaurent& o) {
  if (o.D != D) throw std::invalid_argument("Laurent order mismatch");
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
  tail += o.tail;
  return *this;
}

XLaurent& XLaurent::operator*=(cplx s) {
  for (auto& v : c) v *= s;
  tail *= std::abs(s);
  return *this;
}

XLaurent XLaurent::times_exp(cplx s) const {
  XLaurent r(D);
  r.tail = tail * std::exp(std::abs(s));
  for (int k = -1; k <= D; ++k) {
    cplx acc = 0.0;
    cplx p = 1.0;
    for (int j = 0; k - j >= -1; ++j) {
      if (j) p *= s / static_cast<double>(j);
      acc += c[static_cast<std::size_t>(k - j + 1)] * p;
    }
    r.c[static_cast<std::size_t>(k + 1)] = acc;
  }
  return r;
}

XLaurent XLaurent::dx() const {
  if (std::abs(residue()) > 1e-12) throw std::domain_error("derivative of a Laurent series with a pole");
  XLaurent r(D - 1);
  r.tail = tail * (D + 1);
  for (int k = 0; k <= D - 1; ++k) r.at(k) = static_cast<double>(k + 1) * at(k + 1);
  return r;
}

XLaurent XLaurent::scale_x(cplx s) const {
  XLaurent r(D);
  r.tail = tail;
  r.c[0] = c[0] / s;
  cplx p = 1.0;
  for (int k = 0; k <= D; ++k) {
    r.at(k) = at(k) * p;
    p *= s;
  }
  return r;
}

double XLaurent::max_abs_diff(const XLaurent& o) const {
  double m = 0.0;
  for (int k = -1; k <= std::min(D, o.D); ++k) m = std::max(m, std::abs(c[static_cast<std::size_t>(k + 1)] - o.c[static_cast<std::size_t>(k + 1)]));
  return m;
}

XLaurent QLaurentX::evaluate(cplx tau) const {
  XLaurent r(D);
  r.c[0] = residue;
  for (int k = 0; k <= D; ++k) {
    const auto v = coeff[static_cast<std::size_t>(k)].evaluate(tau);
    r.at(k) = v.value;
    r.tail = std::max(r.tail, v.tail);
  }
  return r;
}

QLaurentX F_xseries(cplx w, int D, int Q, FPart part, bool include_coth_w) {
  if (D < 0 || Q < 0) throw std::invalid_argument("bad order");
  QLaurentX L;
  L.D = D;
  L.residue = part == FPart::Value ? kTwoPiI : cplx(0.0);
  L.coeff.assign(static_cast<std::size_t>(D) + 1, QSeries{1, std::vector<cplx>(static_cast<std::size_t>(Q) + 1)});
  const cplx piw = cplx(0.0, kPi) * w;
  if (part == FPart::Value) {
    for (int k = 1; k <= D; k += 2)
      L.coeff[static_cast<std::size_t>(k)].a[0] = kTwoPiI * to_double(bernoulli_number(k + 1)) / factorial(k + 1);
    if (include_coth_w) {
      if (std::abs(std::sinh(piw)) < 1e-12) throw PoleProximity("F pole: w is on the lattice");
      L.coeff[0].a[0] = cplx(0.0, kPi) * std::cosh(piw) / std::sinh(piw);
    }
  } else if (include_coth_w) {
    const cplx sh = std::sinh(piw);
    if (std::abs(sh) < 1e-12) throw PoleProximity("F pole: w is on the lattice");
    L.coeff[0].a[0] = kPi * kPi / (sh * sh);
  }
  const cplx m4pii(0.0, -4.0 * kPi);
  const int shift = part == FPart::Value ? 0 : 1;
  for (int n = 1; n <= Q; ++n) {
    for (int d = 1; d <= n; ++d) {
      if (n % d) continue;
      const cplx arg = kTwoPiI * static_cast<double>(n) * w / static_cast<double>(d);
      const cplx sh = std::sinh(arg), ch = std::cosh(arg);
      const cplx pre = part == FPart::Value ? m4pii : m4pii * kTwoPiI * static_cast<double>(n) / static_cast<double>(d);
      double dk = 1.0;  // d^k / k!
      for (int k = 0; k <= D; ++k) {
        if (k) dk *= static_cast<double>(d) / k;
        const cplx S = ((k + shift) % 2 == 0) ? sh : ch;
        L.coeff[static_cast<std::size_t>(k)].a[static_cast<std::size_t>(n)] += pre * dk * S;
      }
    }
  }
  return L;
}

JacobiLaurent F_laurent(cplx w, cplx tau, int D, int Q, bool include_coth_w) {
  if (tau.imag() <= 0) throw std::invalid_argument("tau must lie in the upper half plane");
  const double j = std::round(w.imag() / tau.imag());
  const cplx wr = w - j * tau;
  const int Qe = Q > 0 ? Q : auto_qorder(tau, 1, D + 2);
  const QLaurentX V = F_xseries(wr, D, Qe, FPart::Value, include_coth_w);
  const QLaurentX W = F_xseries(wr, D, Qe, FPart::DW, include_coth_w);
  QLaurentX T = V;
  T.residue = 0.0;
  for (auto& s : T.coeff) s = s.dtau();
  JacobiLaurent J;
  J.F = V.evaluate(tau);
  J.F_w = W.evaluate(tau);
  J.F_tau = T.evaluate(tau);
  if (j != 0.0) {
    J.F_tau = (J.F_tau - J.F_w * j).times_exp(-j);
    J.F = J.F.times_exp(-j);
    J.F_w = J.F_w.times_exp(-j);
  }
  return J;
}

CoefficientSeries h_g_series_lift(const TorsionPoint& a, int p, int r, cplx z, cplx tau, int D, int Q) {
  const double xb = a.xr() + p;
  const double yb = a.yr() + r;
  const cplx w0 = z - xb - yb * tau;
  const JacobiLaurent J = F_laurent(w0, tau, D + 1, Q);
  CoefficientSeries out;
  XLaurent h = J.F.times_exp(-yb);
  h.c[0] -= kTwoPiI;
  if (std::abs(h.c[0]) > 1e-12) throw std::logic_error("h_alpha retains an x^{-1} term");
  h.c[0] = 0.0;
  XLaurent ht = (J.F_tau - J.F_w * yb).times_exp(-yb);
  const XLaurent hz = J.F_w.times_exp(-yb);
  out.g = h.dx();
  out.g_z = hz.dx();
  auto cut = [D](const XLaurent& s) {
    XLaurent t(D);
    std::copy(s.c.begin(), s.c.begin() + D + 2, t.c.begin());
    t.tail = s.tail;
    return t;
  };
  out.h = cut(h);
  out.h_tau = cut(ht);
  return out;
}

CoefficientSeries h_g_series(const TorsionPoint& a, cplx z, cplx tau, int D, int Q) {
  return h_g_series_lift(a, 0, 0, z, tau, D, Q);
}

std::vector<cplx> A_coeffs(int M, const TorsionPoint& a, cplx tau, int Q) {
  XLaurent g;
  if (a.is_zero()) {
    // The odd coth(pi i z) term carries the 1/z pole; the symmetric limit z -> 0 drops it.
    const JacobiLaurent J = F_laurent(0.0, tau, M + 1, Q, false);
    XLaurent h = J.F;
    h.c[0] = 0.0;
    g = h.dx();
  } else {
    g = h_g_series(a, 0.0, tau, M, Q).g;
  }
  std::vector<cplx> out(static_cast<std::size_t>(M) + 1);
  for (int m = 0; m <= M; ++m) out[static_cast<std::size_t>(m)] = g.at(m);
  return out;
}

cplx A_cusp_value(int m, const TorsionPoint& a) {
  return kTwoPiI * (m % 2 ? -1.0 : 1.0) * bernoulli_eval(m + 2, a.yr()) / (factorial(m) * (m + 2));
}

CheckResult verify_heat(cplx z, cplx tau, int D, int Q, double tol) {
  const JacobiLaurent J = F_laurent(z, tau, D + 1, Q);
  const XLaurent rhs = J.F_w.dx();
  double diff = 0.0;
  double scale = 0.0;
  for (int k = 0; k <= D; ++k) {
    diff = std::max(diff, std::abs(J.F_tau.at(k) - rhs.at(k)));
    scale = std::max(scale, std::abs(J.F_tau.at(k)));
  }
  const double tail = J.F_tau.tail + rhs.tail;
  return make_check("heat",
                    {{"z", fmt::format("{:.6g}{:+.6g}i", z.real(), z.imag())},
                     {"tau", fmt::format("{:.6g}{:+.6g}i", tau.real(), tau.imag())},
                     {"D", std::to_string(D)},
                     {"Q", std::to_string(Q)}},
                    diff + tail, tol, fmt::format("termwise {:.3g}, tail {:.3g}, scale {:.3g}", diff, tail, scale));
}

}  // namespace kzb
