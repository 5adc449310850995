#pragma once

#include <vector>

#include "kzb/derivation.hpp"
#include "kzb/lie.hpp"
#include "kzb/report.hpp"
#include "kzb/special.hpp"

namespace kzb {

struct KZBContext {
  int level = 1;
  Subgroup subgroup = Subgroup::Full;
  int degree = 5;
  int qorder = 0;  // 0 selects the number of q-terms per point
  double tolerance = 1e-7;
};

// ---------------------------------------------------------------- derivations

// X -> 0, Y -> sum_{j+k=m-1} sum_b (-1)^j [ad_X^j t_b, ad_X^k t_{a+b}],
// t_b -> [t_b, ad_X^m t_{b+a} + (-1)^m ad_X^m t_{b-a}].
Derivation delta_deriv(const LieContext& lie, int m, const TorsionPoint& a);
// The t_b image formula above, for any b including 0.
Series delta_t_image(const LieContext& lie, int m, const TorsionPoint& a, const TorsionPoint& b);
// delta([X, Y]) - sum_b delta(t_b) with every t_b image taken from the formula.
Series delta_consistency_defect(const LieContext& lie, int m, const TorsionPoint& a);
// delta_{m-2, a} + ad(ad_X^{m-2}(t_a + (-1)^m t_{-a})), m >= 2.
Derivation epsilon_deriv(const LieContext& lie, int m, const TorsionPoint& a);
// X -> Y, all other generators -> 0.
Derivation y_d_x(const LieContext& lie);

// ---------------------------------------------------------------- connection form

// Omega = A dtau + B dz at one point. B is inner: B = ad(b_element).
struct ConnectionValue {
  Derivation A;
  Derivation B;
  Series b_element;
};

struct Curvature {
  Derivation exactness;  // d_tau B - d_z A
  Derivation wedge;      // [A, B]
  Derivation total;
};

// Automorphy factor of an element (gamma, (m, n)) acting by
// (z, tau) -> ((z + m tau + n)/(c tau + d), gamma tau), with the closed form
// of its logarithmic derivative dM M^-1 = d_tau dtau + d_z dz.
struct FactorOfAutomorphy {
  Automorphism map;
  Automorphism inverse;
  Derivation d_tau;
  Derivation d_z;
};

struct FormResidual {
  Derivation dtau;
  Derivation dz;
  double max_abs() const { return std::max(dtau.max_abs(), dz.max_abs()); }
};

class KZBConnection {
 public:
  explicit KZBConnection(const KZBContext& ctx);

  const KZBContext& context() const { return ctx_; }
  const LieContext& lie() const { return lie_; }

  // sum_a f_a(X) . t_a with f_a given by Laurent data without residue.
  Series t_sum(const std::vector<XLaurent>& f) const;
  // ad_X^k t_a, k <= degree.
  const Series& ad_x_t(const TorsionPoint& a, int k) const;
  const Derivation& delta(int m, const TorsionPoint& a) const;

  ConnectionValue omega(cplx tau, cplx z) const;
  // Only the dz coefficient 2 pi i Y + sum_a h_a(X, z | tau) . t_a.
  Series dz_element(cplx tau, cplx z) const;
  Curvature curvature(cplx tau, cplx z) const;

  FactorOfAutomorphy automorphy(const Mat2& g, int m, int n, cplx tau, cplx z) const;
  // Central differences of the factor in tau and z, as derivations dM M^-1.
  FormResidual automorphy_log_derivative_numeric(const Mat2& g, int m, int n, cplx tau, cplx z) const;

  // g^* Omega - (M Omega M^-1 - dM M^-1) at (tau, z).
  FormResidual invariance_residual(const Mat2& g, int m, int n, cplx tau, cplx z) const;

 private:
  int q_for(cplx tau) const;

  KZBContext ctx_;
  LieContext lie_;
  std::vector<std::vector<Series>> adx_t_;       // [point index][k]
  std::vector<std::vector<Derivation>> delta_;   // [m][point index]
  Derivation ydx_;
};

// Generators of the selected subgroup (Gamma(N), Gamma_1(N) or SL2(Z)) from
// a coset enumeration with S and T.
std::vector<Mat2> subgroup_generators(Subgroup s, int N);

// ---------------------------------------------------------------- restrictions

struct ZeroSectionRestriction {
  Derivation dtau;
  Series residue;  // coefficient of dz/z
};
ZeroSectionRestriction restrict_zero_section(const KZBConnection& conn, cplx tau);

// e^{-y X} . t_a.
Series residue_torsion(const LieContext& lie, const TorsionPoint& a);

// N (Y d/dX + s sum (-1)^m B_{m+2}([y_a]) / (m! (m+2)) eps_{m+2, a gamma^-1}),
// s = 1/2 (restricted dq/q coefficient) or s = 1 (the displayed nodal residue).
Derivation residue_cusp(const LieContext& lie, const Mat2& gamma, bool half = true);

// Restriction to the identity component of the fiber q_N = 0, with
// w = e^{2 pi i z}: Omega = dq (dq_N/q_N) + (log_part / w + sum_k pole[k] / (w - zeta^k)) dw.
// The dw part is inner; its coefficients are Lie elements.
struct FiberRestriction {
  Derivation dq;
  Series log_part;
  std::vector<Series> pole;  // at zeta^k = e^{2 pi i k / N}
  Series at(cplx w) const;
};
FiberRestriction restrict_singular_fiber(const LieContext& lie);

// Cyclotomic KZ form e_0 dw/w + sum_k e_k dw/(w - zeta^k) evaluated at w, as
// coefficients of e_0, e_1, ..., e_N.
std::vector<cplx> kz_form(int N, cplx w);
// Images of e_0 (j = 0) and e_{zeta^k} (j = k + 1) under the substitution
// homomorphism into the fiber algebra.
Series kz_substitute(const LieContext& lie, int j);
// Coefficientwise comparison of the substituted KZ form with the fiber restriction.
CheckResult degeneration_check(const LieContext& lie);

}  // namespace kzb
