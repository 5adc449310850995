#include "kzb/hodge.hpp"

#include <algorithm>
#include <climits>
#include <map>

#include <Eigen/Dense>
#include <fmt/format.h>

namespace kzb {

int MultiDegree::t_total() const {
  int s = 0;
  for (const auto& [a, k] : t) s += k;
  return s;
}

MultiDegree multidegree(const Alphabet& al, const Word& w) {
  MultiDegree d;
  for (int i = 0; i < w.length(); ++i) {
    const int g = w[i];
    if (g == Alphabet::X)
      ++d.x;
    else if (g == Alphabet::Y)
      ++d.y;
    else
      ++d.t[al.point(g)];
  }
  return d;
}

Levels word_levels(const Alphabet&, const Word& w) {
  int x = 0, y = 0, t = 0;
  for (int i = 0; i < w.length(); ++i) {
    const int g = w[i];
    if (g == Alphabet::X)
      ++x;
    else if (g == Alphabet::Y)
      ++y;
    else
      ++t;
  }
  return {-(y + t), -(x + y + 2 * t), -(2 * y + 2 * t)};
}

ElementLevels filtration_levels(const Series& v, double tol) {
  const Alphabet al(v.level());
  ElementLevels e;
  e.levels = {INT_MAX, INT_MIN, INT_MIN};
  for (const auto& [w, c] : v.terms()) {
    if (std::abs(c) <= tol) continue;
    const Levels l = word_levels(al, w);
    e.levels.F = std::min(e.levels.F, l.F);
    e.levels.W = std::max(e.levels.W, l.W);
    e.levels.M = std::max(e.levels.M, l.M);
    e.empty = false;
  }
  if (e.empty) e.levels = {};
  return e;
}

namespace {

Shift shift_of(const std::vector<Series>& images, bool identity_part, double tol) {
  Shift s{INT_MAX, INT_MIN, INT_MIN};
  bool any = false;
  for (std::size_t g = 0; g < images.size(); ++g) {
    const ElementLevels e = filtration_levels(images[g], tol);
    if (e.empty) continue;
    const Levels lg = word_levels(Alphabet(images[g].level()), Word::letter(static_cast<int>(g)));
    s.F = std::min(s.F, e.levels.F - lg.F);
    s.W = std::max(s.W, e.levels.W - lg.W);
    s.M = std::max(s.M, e.levels.M - lg.M);
    any = true;
  }
  // The zero map lies in every filtration step; report the identity levels.
  if (!any) return identity_part ? Shift{} : Shift{INT_MAX, INT_MIN, INT_MIN};
  return s;
}

}  // namespace

Shift derivation_filtration_levels(const Derivation& d, double tol) { return shift_of(d.images(), false, tol); }

Shift automorphism_filtration_levels(const Automorphism& phi, double tol) { return shift_of(phi.images(), true, tol); }

Derivation w_graded_part(const Derivation& d, int shift, double tol) {
  const Alphabet al(d.level());
  std::vector<Series> images;
  for (int g = 0; g < static_cast<int>(d.images().size()); ++g) {
    const int wg = word_levels(al, Word::letter(g)).W;
    std::vector<Series::Term> keep;
    for (const auto& [w, c] : d.image(g).terms())
      if (std::abs(c) > tol && word_levels(al, w).W - wg == shift) keep.emplace_back(w, c);
    images.push_back(Series::from_terms(d.level(), d.degree(), std::move(keep)));
  }
  return Derivation::from_images(std::move(images));
}

// ---------------------------------------------------------------- Lie basis

namespace {

bool is_lyndon(const std::vector<int>& w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (!std::lexicographical_compare(w.begin(), w.end(), w.begin() + static_cast<long>(i), w.end())) return false;
  return !w.empty();
}

Series bracketing(int level, int degree, const std::vector<int>& w) {
  if (w.size() == 1) return Series::generator(level, degree, w[0]);
  for (std::size_t i = 1; i < w.size(); ++i) {
    const std::vector<int> v(w.begin() + static_cast<long>(i), w.end());
    if (is_lyndon(v)) {
      const std::vector<int> u(w.begin(), w.begin() + static_cast<long>(i));
      return bracket(bracketing(level, degree, u), bracketing(level, degree, v));
    }
  }
  throw std::logic_error("word has no standard factorization");
}

}  // namespace

std::vector<Word> lyndon_words(const std::vector<int>& gens, int max_length) {
  std::vector<Word> out;
  const int k = static_cast<int>(gens.size());
  if (k == 0 || max_length < 1) return out;
  std::vector<int> w{0};
  while (!w.empty()) {
    std::vector<int> letters;
    for (int p : w) letters.push_back(gens[static_cast<std::size_t>(p)]);
    out.push_back(Word::from(letters));
    const std::size_t m = w.size();
    while (static_cast<int>(w.size()) < max_length) w.push_back(w[w.size() - m]);
    while (!w.empty() && w.back() == k - 1) w.pop_back();
    if (!w.empty()) ++w.back();
  }
  return out;
}

Series lyndon_bracket(int level, int degree, const Word& w) {
  const std::vector<int> letters = w.letters();
  if (letters.empty()) throw std::invalid_argument("empty Lyndon word");
  return bracketing(level, degree, letters);
}

std::vector<Series> lie_basis(const LieContext& lie) {
  std::vector<int> gens;
  for (int g = 0; g < lie.alphabet().size(); ++g)
    if (lie.admitted_generator(g)) gens.push_back(g);
  std::vector<Series> basis;
  for (const Word& w : lyndon_words(gens, lie.degree())) basis.push_back(lyndon_bracket(lie.level(), lie.degree(), w));
  return basis;
}

// ---------------------------------------------------------------- sl2

bool Sl2Report::pass() const {
  if (!precondition) return false;
  return std::all_of(records.begin(), records.end(), [](const Sl2Record& r) { return r.pass; });
}

namespace {

// Words of the given W and M levels only.
Series project(const Series& v, const Alphabet& al, int W, int M) {
  std::vector<Series::Term> keep;
  for (const auto& [w, c] : v.terms()) {
    const Levels l = word_levels(al, w);
    if (l.W == W && l.M == M) keep.emplace_back(w, c);
  }
  return Series::from_terms(v.level(), v.degree(), std::move(keep));
}

Series project_w(const Series& v, const Alphabet& al, int W) {
  std::vector<Series::Term> keep;
  for (const auto& [w, c] : v.terms())
    if (word_levels(al, w).W == W) keep.emplace_back(w, c);
  return Series::from_terms(v.level(), v.degree(), std::move(keep));
}

int rank_of(const std::vector<Series>& rows, double tol) {
  std::map<Word, Eigen::Index> cols;
  for (const auto& r : rows)
    for (const auto& [w, c] : r.terms()) cols.emplace(w, static_cast<Eigen::Index>(cols.size()));
  if (rows.empty() || cols.empty()) return 0;
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const auto& [w, c] : rows[i].terms()) A(static_cast<Eigen::Index>(i), cols.at(w)) = c;
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
  lu.setThreshold(tol);
  return static_cast<int>(lu.rank());
}

}  // namespace

Sl2Report sl2_iso_check(const LieContext& lie, const Derivation& L, int max_weight, int max_r, double tol) {
  Sl2Report rep;
  rep.shift = derivation_filtration_levels(L, tol);
  if (rep.shift.W > 0 || rep.shift.M > -2) {
    rep.violation = fmt::format("L has W shift {} (need <= 0) and M shift {} (need <= -2)", rep.shift.W, rep.shift.M);
    return rep;
  }
  rep.precondition = true;

  const Alphabet& al = lie.alphabet();
  // Basis elements of Gr^W_{-m}, keyed by (m, r) with M level -m + r.
  std::map<std::pair<int, int>, std::vector<Series>> pieces;
  for (Series& b : lie_basis(lie)) {
    const Levels l = word_levels(al, b.terms().front().first);
    pieces[{-l.W, l.M - l.W}].push_back(std::move(b));
  }
  for (int m = 1; m <= max_weight; ++m) {
    for (int r = 0; r <= max_r; ++r) {
      auto src = pieces.find({m, r});
      auto dst = pieces.find({m, -r});
      if (src == pieces.end() && dst == pieces.end()) continue;
      Sl2Record rec;
      rec.weight = m;
      rec.r = r;
      rec.dim_source = src == pieces.end() ? 0 : static_cast<int>(src->second.size());
      rec.dim_target = dst == pieces.end() ? 0 : static_cast<int>(dst->second.size());
      std::vector<Series> images;
      if (src != pieces.end()) {
        for (const Series& v : src->second) {
          Series x = v;
          // L preserves W_{-m}, so the induced map on Gr^W may drop lower weights at each step.
          for (int k = 0; k < r; ++k) x = project_w(L.apply(x), al, -m);
          images.push_back(project(x, al, -m, -m - r));
        }
      }
      rec.rank = rank_of(images, tol);
      rec.pass = rec.dim_source == rec.dim_target && rec.rank == rec.dim_source;
      rep.records.push_back(rec);
    }
  }
  return rep;
}

}  // namespace kzb
