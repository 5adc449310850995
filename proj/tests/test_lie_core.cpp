#include <map>
#include <random>
#include <vector>

#include "doctest.h"
#include "kzb/derivation.hpp"
#include "kzb/lie.hpp"
#include "test_util.hpp"

using namespace kzb;
using kzb::testing::random_lie;

namespace {

// Reference product on explicit letter vectors.
std::map<std::vector<int>, cplx> naive_product(const Series& a, const Series& b) {
  std::map<std::vector<int>, cplx> out;
  for (const auto& [u, cu] : a.terms())
    for (const auto& [v, cv] : b.terms()) {
      auto w = u.letters();
      const auto lv = v.letters();
      w.insert(w.end(), lv.begin(), lv.end());
      if (static_cast<int>(w.size()) <= a.degree()) out[w] += cu * cv;
    }
  return out;
}

Series random_series(std::mt19937_64& rng, int N, int D, int terms) {
  std::uniform_int_distribution<int> len(0, D), gen(0, N * N), coef(-3, 3);
  std::vector<Series::Term> ts;
  for (int i = 0; i < terms; ++i) {
    std::vector<int> w(static_cast<std::size_t>(len(rng)));
    for (auto& g : w) g = gen(rng);
    ts.emplace_back(Word::from(w), cplx(coef(rng), coef(rng)));
  }
  return Series::from_terms(N, D, ts);
}

}  // namespace

TEST_CASE("torsion group enumeration and group law") {
  CHECK(torsion_group(1).size() == 1);
  CHECK(torsion_group(1)[0].is_zero());
  CHECK(torsion_group(2).size() == 4);
  const auto g3 = torsion_group(3);
  CHECK(g3.size() == 9);
  for (const auto& a : g3)
    for (const auto& b : g3) {
      const auto s = a + b;
      CHECK(std::find(g3.begin(), g3.end(), s) != g3.end());
      CHECK((s - b) == a);
    }
  CHECK_THROWS(torsion_group(0));
}

TEST_CASE("right SL2 action on torsion points") {
  const Mat2 S{0, -1, 1, 0}, T{1, 1, 0, 1};
  for (int N : {2, 3, 4, 5}) {
    for (const auto& a : torsion_group(N)) {
      CHECK(torsion_act_right(a, Mat2{}) == a);
      for (const Mat2& g : {S, T, S * T, T * S * T}) {
        for (const Mat2& h : {S, T, T * T * S}) {
          // Right action: (a g) h = a (g h).
          CHECK(torsion_act_right(torsion_act_right(a, g), h) == torsion_act_right(a, g * h));
        }
      }
      const Mat2 congruent = Mat2{1, N, 0, 1} * Mat2{1, 0, N, 1};
      REQUIRE(congruent.det() == 1);
      CHECK(torsion_act_right(a, congruent) == a);
    }
  }
  // Row vector (y x) times [[0,-1],[1,0]] for alpha = (1/4, 0).
  CHECK(torsion_act_right({1, 0, 4}, S) == TorsionPoint(0, 1, 4));
  CHECK_THROWS(torsion_act_right({1, 0, 4}, Mat2{2, 0, 0, 1}));
}

TEST_CASE("packed words order like letter vectors") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> len(0, 8), gen(0, 16);
  std::vector<std::vector<int>> ws;
  for (int i = 0; i < 400; ++i) {
    std::vector<int> w(static_cast<std::size_t>(len(rng)));
    for (auto& g : w) g = gen(rng);
    ws.push_back(w);
  }
  for (std::size_t i = 0; i + 1 < ws.size(); ++i) {
    const Word a = Word::from(ws[i]), b = Word::from(ws[i + 1]);
    CHECK(a.letters() == ws[i]);
    CHECK((a < b) == (ws[i] < ws[i + 1]));
    CHECK((a == b) == (ws[i] == ws[i + 1]));
    auto cat = ws[i];
    cat.insert(cat.end(), ws[i + 1].begin(), ws[i + 1].end());
    if (cat.size() <= 15) CHECK((a * b).letters() == cat);
    if (!ws[i].empty()) {
      const int from = static_cast<int>(ws[i].size()) / 2;
      const int count = static_cast<int>(ws[i].size()) - from;
      CHECK(a.sub(from, count).letters() == std::vector<int>(ws[i].begin() + from, ws[i].end()));
    }
  }
}

TEST_CASE("series product matches the reference product") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Series a = random_series(rng, 2, 6, 30), b = random_series(rng, 2, 6, 30);
    const auto ref = naive_product(a, b);
    const Series p = a * b;
    std::size_t nonzero = 0;
    for (const auto& [w, c] : ref) {
      CHECK(std::abs(p.coeff(Word::from(w)) - c) < 1e-12);
      if (c != 0.0) ++nonzero;
    }
    CHECK(p.size() == nonzero);
  }
}

TEST_CASE("bracket basics") {
  const LieContext ctx(2, 6);
  const Series X = ctx.X(), Y = ctx.Y();
  CHECK(bracket(X, X).is_zero());
  const Series xy = bracket(X, Y);
  CHECK(xy.size() == 2);
  CHECK(xy.coeff(Word::from({0, 1})) == cplx(1));
  CHECK(xy.coeff(Word::from({1, 0})) == cplx(-1));
  CHECK_THROWS(bracket(X, LieContext(3, 6).Y()));
  CHECK_THROWS(bracket(X, LieContext(2, 5).Y()));
}

TEST_CASE("antisymmetry and Jacobi on random Lie elements") {
  std::mt19937_64 rng(3);
  for (int N : {1, 2}) {
    const LieContext ctx(N, 6);
    for (int trial = 0; trial < 10; ++trial) {
      const Series a = random_lie(rng, ctx, 3), b = random_lie(rng, ctx, 3), c = random_lie(rng, ctx, 3);
      CHECK((bracket(a, b) + bracket(b, a)).max_abs() == 0.0);
      const Series jac = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b));
      CHECK(jac.max_abs() < 1e-12);
      CHECK(is_lie(bracket(a, b)));
    }
  }
}

TEST_CASE("exp and log are inverse") {
  const LieContext ctx(2, 7);
  const Series X = ctx.X();
  CHECK(distance(exp_series(ctx.zero()), ctx.one()) == 0.0);
  CHECK(distance(log_series(exp_series(X)), X) < 1e-15);
  CHECK(distance(exp_series(X) * exp_series(-X), ctx.one()) < 1e-15);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const Series a = random_lie(rng, ctx, 2);
    CHECK(distance(log_series(exp_series(a)), a) < 1e-12);
    const Series g = exp_series(a);
    CHECK(distance(exp_series(log_series(g)), g) < 1e-12);
  }
  CHECK_THROWS(exp_series(ctx.one()));
  CHECK_THROWS(log_series(X));
}

TEST_CASE("BCH low degrees and group-like products") {
  const LieContext ctx(1, 6);
  const Series X = ctx.X(), Y = ctx.Y();
  const Series z = bch(X, Y);
  CHECK(distance(z.homogeneous(1), X + Y) < 1e-15);
  CHECK(distance(z.homogeneous(2), bracket(X, Y) * 0.5) < 1e-15);
  const Series third = (bracket(X, bracket(X, Y)) + bracket(Y, bracket(Y, X))) * (1.0 / 12.0);
  CHECK(distance(z.homogeneous(3), third) < 1e-15);
  const Series fourth = bracket(Y, bracket(X, bracket(X, Y))) * (-1.0 / 24.0);
  CHECK(distance(z.homogeneous(4), fourth) < 1e-15);
  CHECK(is_lie(z));
  CHECK(distance(bch(X, ctx.zero()), X) < 1e-15);
  // exp(5X) has coefficients up to 5^6/6!; the log cancels them back.
  CHECK(distance(bch(X * 2.0, X * 3.0), X * 5.0) < 1e-10);

  std::mt19937_64 rng(13);
  const LieContext c2(2, 5);
  for (int trial = 0; trial < 5; ++trial) {
    const Series a = random_lie(rng, c2, 2), b = random_lie(rng, c2, 2);
    const Series ga = exp_series(a), gb = exp_series(b);
    CHECK(distance(bch(log_series(ga), log_series(gb)), log_series(ga * gb)) < 1e-12);
    CHECK(is_lie(log_series(ga * gb)));
  }
}

TEST_CASE("Dynkin certification") {
  const LieContext ctx(2, 5);
  CHECK(is_lie(bracket(ctx.X(), bracket(ctx.Y(), ctx.t({1, 0, 2})))));
  CHECK_FALSE(is_lie(ctx.X() * ctx.Y()));
  CHECK_FALSE(is_lie(ctx.one()));
  CHECK(lie_defect(ctx.X() * ctx.Y()) > 0.5);
}

TEST_CASE("adjoint series action") {
  const LieContext ctx(1, 7);
  const Series X = ctx.X(), Y = ctx.Y();
  CHECK(distance(adjoint_series_action(std::vector<cplx>{1.0}, X, Y), Y) == 0.0);
  // e^{-mX} . X = X
  std::vector<cplx> em(8);
  double f = 1.0;
  for (int n = 0; n < 8; ++n) {
    if (n) f *= n;
    em[static_cast<std::size_t>(n)] = std::pow(-3.0, n) / f;
  }
  CHECK(distance(adjoint_series_action(em, X, X), X) == 0.0);
  // X/(e^X - 1) . Y through the Bernoulli numbers 1, -1/2, 1/6, 0, -1/30, 0, 1/42.
  const std::vector<double> bern{1, -0.5, 1.0 / 6, 0, -1.0 / 30, 0, 1.0 / 42};
  std::vector<cplx> td(bern.size());
  f = 1.0;
  for (std::size_t n = 0; n < bern.size(); ++n) {
    if (n) f *= static_cast<double>(n);
    td[n] = bern[n] / f;
  }
  const Series got = adjoint_series_action(td, X, Y);
  const Series expect = Y - bracket(X, Y) * 0.5 + bracket(X, bracket(X, Y)) * (1.0 / 12) -
                        ad_power(X, Y, 4) * (1.0 / 720) + ad_power(X, Y, 6) * (1.0 / 30240);
  CHECK(distance(got, expect) < 1e-15);
  CHECK_THROWS_AS(adjoint_series_action(LaurentCoeffs{-1, {2.0, 1.0}}, X, Y), PoleError);
  CHECK(distance(adjoint_series_action(LaurentCoeffs{-1, {0.0, 1.0}}, X, Y), Y) == 0.0);
}

TEST_CASE("t_0 relation") {
  CHECK(distance(resolve_t0(1, 4), bracket(LieContext(1, 4).X(), LieContext(1, 4).Y())) == 0.0);
  for (int N : {2, 3, 4}) {
    const LieContext ctx(N, 4);
    Series sum = ctx.zero();
    for (const auto& a : torsion_group(N)) sum += ctx.t(a);
    CHECK(distance(sum, bracket(ctx.X(), ctx.Y())) == 0.0);
  }
  const LieContext c2(2, 3);
  const Series explicit_t0 = bracket(c2.X(), c2.Y()) - c2.t({1, 0, 2}) - c2.t({0, 1, 2}) - c2.t({1, 1, 2});
  CHECK(distance(c2.t({0, 0, 2}), explicit_t0) == 0.0);
  // Level structures zero out the non-admitted generators.
  const LieContext g1(3, 3, Subgroup::Gamma1);
  CHECK(g1.t({1, 1, 3}).is_zero());
  CHECK_FALSE(g1.t({1, 0, 3}).is_zero());
  CHECK(distance(g1.t({0, 0, 3}), bracket(g1.X(), g1.Y()) - g1.t({1, 0, 3}) - g1.t({2, 0, 3})) == 0.0);
  CHECK(distance(LieContext(2, 3, Subgroup::SL2Z).t({0, 0, 2}), bracket(c2.X(), c2.Y())) == 0.0);
}

TEST_CASE("derivations obey Leibniz and compose") {
  std::mt19937_64 rng(17);
  const LieContext ctx(2, 6);
  std::vector<Series> im1, im2;
  for (int g = 0; g < ctx.alphabet().size(); ++g) {
    im1.push_back(random_lie(rng, ctx, 2));
    im2.push_back(random_lie(rng, ctx, 1) + random_lie(rng, ctx, 3));
  }
  const Derivation d1 = Derivation::from_images(im1), d2 = Derivation::from_images(im2);
  const Series a = random_lie(rng, ctx, 2), b = random_lie(rng, ctx, 2);
  CHECK(distance(d1.apply(a * b), d1.apply(a) * b + a * d1.apply(b)) < 1e-12);
  const Derivation c = commutator(d1, d2);
  const Series v = random_lie(rng, ctx, 2);
  CHECK(distance(c.apply(v), d1.apply(d2.apply(v)) - d2.apply(d1.apply(v))) < 1e-11);
  CHECK(is_lie(d1.apply(bracket(a, b))));
  const Derivation inner = Derivation::inner(a);
  CHECK(distance(inner.apply(b), bracket(a, b)) < 1e-13);
  CHECK(inner.min_shift() == a.min_length());
}

TEST_CASE("automorphisms are multiplicative and exp(ad) conjugates") {
  std::mt19937_64 rng(19);
  const LieContext ctx(2, 6);
  const Series x = random_lie(rng, ctx, 1) * 0.3;
  const Automorphism phi = Automorphism::exp_ad(x);
  const Series v = random_lie(rng, ctx, 2), w = random_lie(rng, ctx, 2);
  CHECK(distance(phi.apply(v * w), phi.apply(v) * phi.apply(w)) < 1e-12);
  CHECK(distance(phi.apply(v), exp_series(x) * v * exp_series(-x)) < 1e-12);
  const Automorphism inv = Automorphism::exp_ad(-x);
  CHECK(distance(phi.after(inv), Automorphism(2, 6)) < 1e-12);
  const Derivation d = Derivation::inner(w);
  CHECK(distance(conjugate(phi, d, inv), Derivation::inner(phi.apply(w))) < 1e-11);
}

TEST_CASE("text serialization round trip") {
  std::mt19937_64 rng(23);
  const LieContext ctx(3, 5);
  const Series a = random_lie(rng, ctx, 3) + ctx.one() * cplx(0.25, -1.5);
  const std::string text = a.to_text();
  CHECK(distance(Series::from_text(3, 5, text), a) == 0.0);
  CHECK(text.find("T(") != std::string::npos);
  CHECK_THROWS(Series::from_text(3, 5, "Q\t1\t0\n"));
  CHECK_THROWS(Series::from_text(3, 2, "X,Y,X\t1\t0\n"));
}
