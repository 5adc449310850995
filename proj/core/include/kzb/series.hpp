#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "kzb/word.hpp"

namespace kzb {

using cplx = std::complex<double>;

// Truncated noncommutative power series in the generators of Alphabet(N):
// a sparse sorted list of (word, coefficient) with every word of length <= D.
class Series {
 public:
  using Term = std::pair<Word, cplx>;

  Series() = default;
  Series(int level, int degree);

  static Series unit(int level, int degree, cplx c = 1.0);
  static Series generator(int level, int degree, int g, cplx c = 1.0);
  // Sorts, merges duplicate words, drops exact zeros and words longer than D.
  static Series from_terms(int level, int degree, std::vector<Term> terms);

  int level() const { return N_; }
  int degree() const { return D_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  cplx coeff(const Word& w) const;
  cplx constant() const;
  // Smallest word length carrying a nonzero coefficient (D + 1 if zero).
  int min_length() const;
  Series homogeneous(int k) const;
  Series truncated(int k) const;
  Series with_degree(int degree) const;
  double max_abs() const;
  Series pruned(double eps) const;

  Series& operator+=(const Series& o);
  Series& operator-=(const Series& o);
  Series& operator*=(cplx c);
  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator*(Series a, cplx c) { return a *= c; }
  friend Series operator*(cplx c, Series a) { return a *= c; }
  Series operator-() const;
  friend Series operator*(const Series& a, const Series& b);

  // One line per word: comma-separated generator tags, real and imaginary
  // part, tab separated. The empty word is written as "1".
  std::string to_text() const;
  static Series from_text(int level, int degree, const std::string& text);

  void check_compatible(const Series& o) const;

 private:
  int N_ = 1;
  int D_ = 0;
  std::vector<Term> terms_;
};

// Largest coefficient modulus of a - b.
double distance(const Series& a, const Series& b);

}  // namespace kzb
