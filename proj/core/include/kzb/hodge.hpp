#pragma once

#include <map>
#include <string>
#include <vector>

#include "kzb/derivation.hpp"
#include "kzb/lie.hpp"

namespace kzb {

// Letter counts of a word over X, Y and the t_a (a != 0).
struct MultiDegree {
  int x = 0, y = 0;
  std::map<TorsionPoint, int> t;
  int t_total() const;
  int total() const { return x + y + t_total(); }
};
MultiDegree multidegree(const Alphabet& al, const Word& w);

// Levels of a single word: F = -(deg_Y + deg_T), W = -(deg_X + deg_Y + 2 deg_T),
// M = -(2 deg_Y + 2 deg_T). A word of levels (f, w, m) lies in F^f, W_w, M_m.
struct Levels {
  int F = 0, W = 0, M = 0;
  bool operator==(const Levels&) const = default;
};
Levels word_levels(const Alphabet& al, const Word& w);

// An element lies in F^a W_b M_c iff every word with |coefficient| > tol does.
// F is the minimum over words, W and M the maximum. Empty elements report
// empty = true.
struct ElementLevels {
  Levels levels;
  bool empty = true;
};
ElementLevels filtration_levels(const Series& v, double tol = 1e-12);

// Shifts of an endomorphism: it maps F^a into F^{a + F}, W_b into W_{b + W}
// and M_c into M_{c + M}, computed from the generator images.
struct Shift {
  int F = 0, W = 0, M = 0;
  // Membership in F^f W_w M_m End.
  bool within(int f, int w, int m) const { return F >= f && W <= w && M <= m; }
};
Shift derivation_filtration_levels(const Derivation& d, double tol = 1e-12);
Shift automorphism_filtration_levels(const Automorphism& phi, double tol = 1e-12);

// Keeps only the words of each generator image whose W level exceeds that of
// the generator by exactly `shift`.
Derivation w_graded_part(const Derivation& d, int shift, double tol = 1e-12);

// Lyndon words over the given generators up to the given length, in
// lexicographic order of generator positions in `gens`.
std::vector<Word> lyndon_words(const std::vector<int>& gens, int max_length);
// Standard bracketing of a Lyndon word.
Series lyndon_bracket(int level, int degree, const Word& w);

// Basis of the truncated free Lie algebra on the admitted generators.
std::vector<Series> lie_basis(const LieContext& lie);

struct Sl2Record {
  int weight = 0;  // the piece Gr^W_{-weight}
  int r = 0;
  int dim_source = 0;  // Gr^M_{-weight+r}
  int dim_target = 0;  // Gr^M_{-weight-r}
  int rank = 0;
  bool pass = false;
};

struct Sl2Report {
  bool precondition = false;
  std::string violation;
  Shift shift;
  std::vector<Sl2Record> records;
  bool pass() const;
};

// For every weight 1 <= m <= max_weight and 0 <= r <= max_r realized in the
// truncation, the rank of L^r : Gr^M_{-m+r} Gr^W_{-m} -> Gr^M_{-m-r} Gr^W_{-m}.
// Requires L in W_0 and M_{-2}.
Sl2Report sl2_iso_check(const LieContext& lie, const Derivation& L, int max_weight, int max_r, double tol = 1e-9);

}  // namespace kzb
