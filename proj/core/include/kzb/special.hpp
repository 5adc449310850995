#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "kzb/report.hpp"
#include "kzb/torsion.hpp"

namespace kzb {

using cplx = std::complex<double>;
using Rational = boost::rational<long long>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline const cplx kTwoPiI{0.0, 2.0 * kPi};

// ---------------------------------------------------------------- Bernoulli

Rational bernoulli_number(int m);  // B_1 = -1/2
// Coefficients c_0..c_m of B_m(x) = sum c_k x^k.
std::vector<Rational> bernoulli_poly(int m);
double bernoulli_eval(int m, double x);
// zeta(m) for m >= 2 from a partial sum with an Euler-Maclaurin tail.
double zeta_value(int m);

// ---------------------------------------------------------------- q-series

// Truncated series sum_{n=0}^{Q} a_n q_N^n in the nome q_N = exp(2 pi i tau / N).
struct QSeries {
  int N = 1;
  std::vector<cplx> a;

  int order() const { return static_cast<int>(a.size()) - 1; }

  struct Value {
    cplx value;
    double tail;  // geometric estimate of the omitted terms n > Q
  };
  Value evaluate(cplx tau) const;
  // d/dtau, i.e. a_n -> (2 pi i n / N) a_n.
  QSeries dtau() const;

  // Header "qseries N Q", then Q+1 lines "n re im".
  std::string to_text() const;
  static QSeries from_text(const std::string& text);
};

cplx nome(cplx tau, int N = 1);

// ---------------------------------------------------------------- Eisenstein

// Value at the cusp i*infinity: -(-2 pi i)^m B_m([y]) / m!.
cplx eisenstein_cusp_value(int m, const TorsionPoint& a);

struct LatticeSum {
  cplx value;            // extrapolated value
  cplx raw;              // plain partial sum over 0 < max(|k|,|l|) <= K0
  double error_estimate; // spread of the last two extrapolation levels
  int cutoff;            // K0 actually used
  std::string method;
};

// Twisted lattice sum sum e^{2 pi i (k x - l y)} / (k tau + l)^m over
// 0 < max(|k|, |l|) <= K. Partial sums at the nested cutoffs K0, K0/2, K0/4,
// K0/8 (K0 the largest multiple of 8N not above K) are combined by Richardson
// extrapolation in K^-2, K^-3, K^-4. Weight 2 is only conditionally
// convergent: alpha = 0 is rejected, other alpha are routed to the
// q-expansion.
LatticeSum eisenstein_lattice(int m, const TorsionPoint& a, cplx tau, int K);

// Fourier expansion in q = e^{2 pi i tau} of G_{m, zeta} with
// zeta = e^{2 pi i k / N} (torsion points with y = 0).
QSeries eisenstein_qexp(int m, int N, int k, int Q);

// Expansion of G_{m, alpha} in q_N for any torsion point alpha.
QSeries eisenstein_qN(int m, const TorsionPoint& a, int Q);

// G_{m, alpha}(tau) from the q_N-expansion with enough terms for double precision.
cplx eisenstein(int m, const TorsionPoint& a, cplx tau);

// Normalized Gamma_1(N) series (m-1)!/(2 pi i)^m / (conj(zeta) + (-1)^m zeta) G_{m,zeta}.
cplx eisenstein_normalized(int m, int N, int k, cplx tau);

// Number of q_N terms after which terms of size |q_N|^{n/2} n^p fall below eps.
int auto_qorder(cplx tau, int N, int p, double eps = 1e-18);

// ---------------------------------------------------------------- theta / F

class PoleProximity : public std::domain_error {
 public:
  explicit PoleProximity(const std::string& what) : std::domain_error(what) {}
};

// theta(u | tau) = sum (-1)^n exp(i pi tau (n+1/2)^2) exp(u (n+1/2)).
cplx theta(cplx u, cplx tau);
cplx theta_prime0(cplx tau);
// 2 pi i theta'(0) theta(x + 2 pi i z) / (theta(x) theta(2 pi i z)).
cplx F_numeric(cplx x, cplx z, cplx tau);

// Evaluated Laurent series in x: c[0] is the x^{-1} coefficient, c[k+1] the
// x^k coefficient, k = 0..D.
struct XLaurent {
  int D = 0;
  std::vector<cplx> c;
  double tail = 0.0;

  XLaurent() = default;
  explicit XLaurent(int degree) : D(degree), c(static_cast<std::size_t>(degree) + 2) {}
  cplx residue() const { return c[0]; }
  cplx at(int k) const { return c[static_cast<std::size_t>(k + 1)]; }
  cplx& at(int k) { return c[static_cast<std::size_t>(k + 1)]; }
  cplx evaluate(cplx x) const;

  XLaurent& operator+=(const XLaurent& o);
  XLaurent& operator-=(const XLaurent& o);
  XLaurent& operator*=(cplx s);
  friend XLaurent operator+(XLaurent a, const XLaurent& b) { return a += b; }
  friend XLaurent operator-(XLaurent a, const XLaurent& b) { return a -= b; }
  friend XLaurent operator*(XLaurent a, cplx s) { return a *= s; }
  // Product with exp(s x).
  XLaurent times_exp(cplx s) const;
  // d/dx; requires a vanishing residue.
  XLaurent dx() const;
  // x -> s x.
  XLaurent scale_x(cplx s) const;
  double max_abs_diff(const XLaurent& o) const;
};

// Laurent coefficients in x of F at a point w with |Im w| < Im tau, each a
// q-series (nome q, N = 1) whose coefficients depend on w. Orders -1..D.
struct QLaurentX {
  int D = 0;
  cplx residue;                 // x^{-1} coefficient (2 pi i, or 0 for derivatives)
  std::vector<QSeries> coeff;   // orders 0..D
  XLaurent evaluate(cplx tau) const;
};

enum class FPart { Value, DW };

// Fourier expansion of F(x, w, tau) (or its w-derivative) with Q q-terms.
// include_coth_w = false drops the pi i coth(pi i w) term (used at w = 0).
QLaurentX F_xseries(cplx w, int D, int Q, FPart part = FPart::Value, bool include_coth_w = true);

// F, dF/dtau and dF/dw as Laurent series in x at (w, tau). The point is moved
// into the strip |Im w| <= Im tau / 2 with F(x, w + j tau) = e^{-j x} F(x, w).
// Q <= 0 selects the number of q-terms automatically.
struct JacobiLaurent {
  XLaurent F, F_tau, F_w;
};
JacobiLaurent F_laurent(cplx w, cplx tau, int D, int Q = 0, bool include_coth_w = true);

// h_alpha = e^{-y x} F(x, z - alpha~, tau) - 2 pi i / x with alpha~ = x + y tau,
// 0 <= x, y < 1, together with g = dh/dx, dh/dtau and dg/dz.
struct CoefficientSeries {
  XLaurent h, g, h_tau, g_z;
};
CoefficientSeries h_g_series(const TorsionPoint& a, cplx z, cplx tau, int D, int Q = 0);
// Same with an explicit lift alpha~ = (x + p) + (y + r) tau.
CoefficientSeries h_g_series_lift(const TorsionPoint& a, int p, int r, cplx z, cplx tau, int D, int Q = 0);

// Taylor coefficients of g_alpha(x, 0 | tau): A_{m, alpha}, m = 0..M.
std::vector<cplx> A_coeffs(int M, const TorsionPoint& a, cplx tau, int Q = 0);
// A_{m, alpha} at q_N = 0: 2 pi i (-1)^m B_{m+2}([y]) / (m! (m+2)).
cplx A_cusp_value(int m, const TorsionPoint& a);

// Heat equation dF/dtau = d^2F/dz dx checked per x-order 0..D on the
// closed-form Fourier terms. The residual is the largest per-order mismatch
// plus the tail of the omitted q-terms.
CheckResult verify_heat(cplx z, cplx tau, int D, int Q, double tol);

}  // namespace kzb
