#include "kzb/derivation.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

#include "kzb/lie.hpp"

namespace kzb {

namespace {

void check_images(const std::vector<Series>& images) {
  if (images.empty()) throw std::invalid_argument("no generator images");
  const Series& f = images.front();
  if (static_cast<int>(images.size()) != Alphabet(f.level()).size())
    throw std::invalid_argument("image count does not match the alphabet");
  for (const auto& s : images) f.check_compatible(s);
}

}  // namespace

Derivation::Derivation(int level, int degree)
    : N_(level), D_(degree), img_(static_cast<std::size_t>(Alphabet(level).size()), Series(level, degree)) {}

Derivation Derivation::inner(const Series& b) {
  Derivation d(b.level(), b.degree());
  for (int g = 0; g < Alphabet(b.level()).size(); ++g)
    d.img_[static_cast<std::size_t>(g)] = bracket(b, Series::generator(b.level(), b.degree(), g));
  return d;
}

Derivation Derivation::from_images(std::vector<Series> images) {
  check_images(images);
  Derivation d(images.front().level(), images.front().degree());
  d.img_ = std::move(images);
  return d;
}

void Derivation::set_image(int g, Series s) {
  s.check_compatible(Series(N_, D_));
  img_.at(static_cast<std::size_t>(g)) = std::move(s);
}

Series Derivation::apply(const Series& v) const {
  v.check_compatible(Series(N_, D_));
  std::vector<Series::Term> out;
  for (const auto& [w, c] : v.terms()) {
    const int L = w.length();
    for (int i = 0; i < L; ++i) {
      const Series& im = img_[static_cast<std::size_t>(w[i])];
      if (im.is_zero()) continue;
      const Word pre = w.sub(0, i);
      const Word suf = w.sub(i + 1, L - i - 1);
      for (const auto& [u, cu] : im.terms()) {
        if (u.length() + L - 1 > D_) continue;
        out.emplace_back(pre * u * suf, c * cu);
      }
    }
  }
  return Series::from_terms(N_, D_, std::move(out));
}

Derivation& Derivation::operator+=(const Derivation& o) {
  if (o.N_ != N_ || o.D_ != D_) throw std::invalid_argument("derivation shape mismatch");
  for (std::size_t g = 0; g < img_.size(); ++g) img_[g] += o.img_[g];
  return *this;
}

Derivation& Derivation::operator-=(const Derivation& o) {
  if (o.N_ != N_ || o.D_ != D_) throw std::invalid_argument("derivation shape mismatch");
  for (std::size_t g = 0; g < img_.size(); ++g) img_[g] -= o.img_[g];
  return *this;
}

Derivation& Derivation::operator*=(cplx c) {
  for (auto& s : img_) s *= c;
  return *this;
}

int Derivation::min_shift() const {
  int m = D_;
  for (const auto& s : img_)
    if (!s.is_zero()) m = std::min(m, s.min_length() - 1);
  return m;
}

double Derivation::max_abs() const {
  double m = 0.0;
  for (const auto& s : img_) m = std::max(m, s.max_abs());
  return m;
}

std::string Derivation::to_text() const {
  const Alphabet al(N_);
  std::string out;
  for (int g = 0; g < al.size(); ++g) {
    out += fmt::format("[{}]\n", al.tag(g));
    out += img_[static_cast<std::size_t>(g)].to_text();
  }
  return out;
}

Derivation commutator(const Derivation& d1, const Derivation& d2) {
  Derivation r(d1.level(), d1.degree());
  for (int g = 0; g < Alphabet(d1.level()).size(); ++g)
    r.set_image(g, d1.apply(d2.image(g)) - d2.apply(d1.image(g)));
  return r;
}

double distance(const Derivation& a, const Derivation& b) { return (a - b).max_abs(); }

Automorphism::Automorphism(int level, int degree) : N_(level), D_(degree) {
  for (int g = 0; g < Alphabet(level).size(); ++g) img_.push_back(Series::generator(level, degree, g));
}

Automorphism Automorphism::from_images(std::vector<Series> images) {
  check_images(images);
  Automorphism a;
  a.N_ = images.front().level();
  a.D_ = images.front().degree();
  a.img_ = std::move(images);
  return a;
}

Automorphism Automorphism::exp_ad(const Series& x) {
  Automorphism a(x.level(), x.degree());
  std::vector<cplx> f(static_cast<std::size_t>(x.degree()) + 1);
  double fact = 1.0;
  for (std::size_t n = 0; n < f.size(); ++n) {
    if (n > 0) fact *= static_cast<double>(n);
    f[n] = 1.0 / fact;
  }
  for (auto& s : a.img_) s = adjoint_series_action(f, x, s);
  return a;
}

void Automorphism::set_image(int g, Series s) {
  s.check_compatible(Series(N_, D_));
  img_.at(static_cast<std::size_t>(g)) = std::move(s);
}

Series Automorphism::apply(const Series& v) const {
  v.check_compatible(Series(N_, D_));
  // Words arrive in lexicographic order, so consecutive words share
  // prefixes; keep the running products of the images along the prefix.
  std::vector<Series> prefix{Series::unit(N_, D_)};
  std::vector<int> letters;
  std::vector<Series::Term> acc;
  for (const auto& [w, c] : v.terms()) {
    const int L = w.length();
    int common = 0;
    while (common < L && common < static_cast<int>(letters.size()) && letters[static_cast<std::size_t>(common)] == w[common])
      ++common;
    letters.resize(static_cast<std::size_t>(common));
    prefix.resize(static_cast<std::size_t>(common) + 1);
    for (int i = common; i < L; ++i) {
      letters.push_back(w[i]);
      prefix.push_back(prefix.back() * img_[static_cast<std::size_t>(w[i])]);
    }
    for (const auto& t : prefix.back().terms()) acc.emplace_back(t.first, c * t.second);
  }
  return Series::from_terms(N_, D_, std::move(acc));
}

Automorphism Automorphism::after(const Automorphism& inner) const {
  Automorphism r = inner;
  for (auto& s : r.img_) s = apply(s);
  return r;
}

double Automorphism::max_abs() const {
  double m = 0.0;
  for (const auto& s : img_) m = std::max(m, s.max_abs());
  return m;
}

double distance(const Automorphism& a, const Automorphism& b) {
  double m = 0.0;
  for (int g = 0; g < Alphabet(a.level()).size(); ++g) m = std::max(m, distance(a.image(g), b.image(g)));
  return m;
}

Derivation conjugate(const Automorphism& phi, const Derivation& d, const Automorphism& phi_inv) {
  Derivation r(d.level(), d.degree());
  for (int g = 0; g < Alphabet(d.level()).size(); ++g) r.set_image(g, phi.apply(d.apply(phi_inv.image(g))));
  return r;
}

Series apply_twisted(const Automorphism& phi, const std::vector<Series>& images, const Series& v) {
  const int N = v.level(), D = v.degree();
  Series result(N, D);
  for (const auto& [w, c] : v.terms()) {
    const int L = w.length();
    std::vector<Series> left{Series::unit(N, D)};
    for (int i = 0; i < L; ++i) left.push_back(left.back() * phi.image(w[i]));
    Series right = Series::unit(N, D);
    for (int i = L - 1; i >= 0; --i) {
      result += left[static_cast<std::size_t>(i)] * images[static_cast<std::size_t>(w[i])] * right * c;
      right = phi.image(w[i]) * right;
    }
  }
  return result;
}

}  // namespace kzb
