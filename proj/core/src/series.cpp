#include "kzb/series.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace kzb {

namespace {

bool term_less(const Series::Term& a, const Series::Term& b) { return a.first < b.first; }

}  // namespace

Series::Series(int level, int degree) : N_(level), D_(degree) {
  if (level < 1) throw std::invalid_argument("level must be positive");
  if (degree < 0 || degree > Word::kMaxLength) throw std::invalid_argument("truncation degree out of range");
}

Series Series::unit(int level, int degree, cplx c) {
  Series s(level, degree);
  if (c != 0.0) s.terms_.emplace_back(Word{}, c);
  return s;
}

Series Series::generator(int level, int degree, int g, cplx c) {
  Series s(level, degree);
  if (g < 0 || g >= Alphabet(level).size()) throw std::invalid_argument("generator index out of range");
  if (c != 0.0 && degree >= 1) s.terms_.emplace_back(Word::letter(g), c);
  return s;
}

Series Series::from_terms(int level, int degree, std::vector<Term> terms) {
  Series s(level, degree);
  std::sort(terms.begin(), terms.end(), term_less);
  auto& out = s.terms_;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (t.first.length() > degree) continue;
    if (!out.empty() && out.back().first == t.first)
      out.back().second += t.second;
    else
      out.push_back(t);
  }
  std::erase_if(out, [](const Term& t) { return t.second == 0.0; });
  return s;
}

void Series::check_compatible(const Series& o) const {
  if (N_ != o.N_) throw std::invalid_argument("series level mismatch");
  if (D_ != o.D_) throw std::invalid_argument("series truncation mismatch");
}

cplx Series::coeff(const Word& w) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), Term{w, 0.0}, term_less);
  if (it != terms_.end() && it->first == w) return it->second;
  return 0.0;
}

cplx Series::constant() const { return coeff(Word{}); }

int Series::min_length() const {
  int m = D_ + 1;
  for (const auto& t : terms_) m = std::min(m, t.first.length());
  return m;
}

Series Series::homogeneous(int k) const {
  Series s(N_, D_);
  for (const auto& t : terms_)
    if (t.first.length() == k) s.terms_.push_back(t);
  return s;
}

Series Series::truncated(int k) const {
  Series s(N_, D_);
  for (const auto& t : terms_)
    if (t.first.length() <= k) s.terms_.push_back(t);
  return s;
}

Series Series::with_degree(int degree) const {
  Series s(N_, degree);
  for (const auto& t : terms_)
    if (t.first.length() <= degree) s.terms_.push_back(t);
  return s;
}

double Series::max_abs() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.second));
  return m;
}

Series Series::pruned(double eps) const {
  Series s(N_, D_);
  for (const auto& t : terms_)
    if (std::abs(t.second) > eps) s.terms_.push_back(t);
  return s;
}

Series& Series::operator+=(const Series& o) {
  check_compatible(o);
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  auto i = terms_.begin();
  auto j = o.terms_.begin();
  while (i != terms_.end() || j != o.terms_.end()) {
    if (j == o.terms_.end() || (i != terms_.end() && i->first < j->first)) {
      out.push_back(*i++);
    } else if (i == terms_.end() || j->first < i->first) {
      out.push_back(*j++);
    } else {
      const cplx c = i->second + j->second;
      if (c != 0.0) out.emplace_back(i->first, c);
      ++i;
      ++j;
    }
  }
  terms_ = std::move(out);
  return *this;
}

Series& Series::operator-=(const Series& o) { return *this += -o; }

Series& Series::operator*=(cplx c) {
  if (c == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.second *= c;
  return *this;
}

Series Series::operator-() const {
  Series s = *this;
  for (auto& t : s.terms_) t.second = -t.second;
  return s;
}

Series operator*(const Series& a, const Series& b) {
  a.check_compatible(b);
  const int D = a.degree();
  std::vector<std::vector<Series::Term>> by_len(static_cast<std::size_t>(D) + 1);
  for (const auto& t : b.terms()) by_len[static_cast<std::size_t>(t.first.length())].push_back(t);
  std::vector<Series::Term> out;
  for (const auto& ta : a.terms()) {
    const int la = ta.first.length();
    for (int lb = 0; la + lb <= D; ++lb)
      for (const auto& tb : by_len[static_cast<std::size_t>(lb)])
        out.emplace_back(ta.first * tb.first, ta.second * tb.second);
  }
  return Series::from_terms(a.level(), D, std::move(out));
}

std::string Series::to_text() const {
  const Alphabet al(N_);
  std::string out;
  for (const auto& [w, c] : terms_) {
    std::string tags;
    for (int i = 0; i < w.length(); ++i) {
      if (i) tags += ',';
      tags += al.tag(w[i]);
    }
    if (tags.empty()) tags = "1";
    out += fmt::format("{}\t{:.17g}\t{:.17g}\n", tags, c.real(), c.imag());
  }
  return out;
}

Series Series::from_text(int level, int degree, const std::string& text) {
  const Alphabet al(level);
  std::vector<Term> terms;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tags;
    double re = 0, im = 0;
    if (!std::getline(ls, tags, '\t') || !(ls >> re >> im))
      throw std::invalid_argument("malformed series line: " + line);
    std::vector<int> gens;
    if (tags != "1") {
      // Tags contain commas inside T(x,y); split on commas outside parentheses.
      std::string cur;
      int depth = 0;
      for (char ch : tags) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == ',' && depth == 0) {
          gens.push_back(al.parse_tag(cur));
          cur.clear();
        } else {
          cur += ch;
        }
      }
      gens.push_back(al.parse_tag(cur));
    }
    if (static_cast<int>(gens.size()) > degree)
      throw std::invalid_argument("word longer than truncation degree: " + tags);
    terms.emplace_back(Word::from(gens), cplx(re, im));
  }
  return from_terms(level, degree, std::move(terms));
}

double distance(const Series& a, const Series& b) { return (a - b).max_abs(); }

}  // namespace kzb
