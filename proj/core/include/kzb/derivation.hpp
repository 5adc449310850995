#pragma once

#include <string>
#include <vector>

#include "kzb/series.hpp"

namespace kzb {

// A derivation of the truncated free algebra, given by the images of the
// generators and extended by the Leibniz rule.
class Derivation {
 public:
  Derivation() = default;
  Derivation(int level, int degree);

  static Derivation inner(const Series& b);  // v -> [b, v]
  static Derivation from_images(std::vector<Series> images);

  int level() const { return N_; }
  int degree() const { return D_; }
  const Series& image(int g) const { return img_[static_cast<std::size_t>(g)]; }
  void set_image(int g, Series s);
  const std::vector<Series>& images() const { return img_; }

  Series apply(const Series& v) const;

  Derivation& operator+=(const Derivation& o);
  Derivation& operator-=(const Derivation& o);
  Derivation& operator*=(cplx c);
  friend Derivation operator+(Derivation a, const Derivation& b) { return a += b; }
  friend Derivation operator-(Derivation a, const Derivation& b) { return a -= b; }
  friend Derivation operator*(Derivation a, cplx c) { return a *= c; }
  friend Derivation operator*(cplx c, Derivation a) { return a *= c; }

  // Smallest (word length of image) - 1 over all generators; the amount by
  // which the derivation raises word length at least.
  int min_shift() const;
  double max_abs() const;
  std::string to_text() const;

 private:
  int N_ = 1;
  int D_ = 0;
  std::vector<Series> img_;
};

// d1 d2 - d2 d1.
Derivation commutator(const Derivation& d1, const Derivation& d2);
double distance(const Derivation& a, const Derivation& b);

// An algebra endomorphism of the truncated free algebra given by generator
// images (images are assumed to have zero constant term).
class Automorphism {
 public:
  Automorphism() = default;
  Automorphism(int level, int degree);  // identity

  static Automorphism from_images(std::vector<Series> images);
  // exp(ad_x): v -> e^x v e^{-x}.
  static Automorphism exp_ad(const Series& x);

  int level() const { return N_; }
  int degree() const { return D_; }
  const Series& image(int g) const { return img_[static_cast<std::size_t>(g)]; }
  void set_image(int g, Series s);
  const std::vector<Series>& images() const { return img_; }

  Series apply(const Series& v) const;
  // (this o inner)(g) = this(inner(g)).
  Automorphism after(const Automorphism& inner) const;
  double max_abs() const;

 private:
  int N_ = 1;
  int D_ = 0;
  std::vector<Series> img_;
};

double distance(const Automorphism& a, const Automorphism& b);

// phi o d o phi_inv as a derivation (phi_inv must be the inverse of phi).
Derivation conjugate(const Automorphism& phi, const Derivation& d, const Automorphism& phi_inv);

// Values of a phi-twisted derivation: sum over letters of
// phi(prefix) images[letter] phi(suffix).
Series apply_twisted(const Automorphism& phi, const std::vector<Series>& images, const Series& v);

}  // namespace kzb
