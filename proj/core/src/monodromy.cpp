#include "kzb/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <fmt/format.h>

namespace kzb {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

cplx cis(double a) { return {std::cos(a), std::sin(a)}; }

double point_segment_distance(cplx p, cplx a, cplx b) {
  const cplx d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

std::string fmt_complex(cplx z) { return fmt::format("{:.17g}{:+.17g}i", z.real(), z.imag()); }

// Margin of a path from a finite set of points.
double margin_from(const FiberPath& path, const std::vector<cplx>& points) {
  double best = INFINITY;
  for (const auto& s : path.segments)
    for (const cplx& p : points) best = std::min(best, s.distance_to(p));
  return best;
}

}  // namespace

// ---------------------------------------------------------------- paths

Segment Segment::line(cplx a, cplx b) {
  Segment s;
  s.kind = Kind::Line;
  s.start = a;
  s.end = b;
  return s;
}

Segment Segment::arc(cplx center, double radius, double angle0, double angle1) {
  if (!(radius > 0)) throw PathError("arc radius must be positive");
  Segment s;
  s.kind = Kind::Arc;
  s.center = center;
  s.radius = radius;
  s.angle0 = angle0;
  s.angle1 = angle1;
  s.start = center + radius * cis(angle0);
  s.end = center + radius * cis(angle1);
  return s;
}

cplx Segment::point(double t) const {
  if (kind == Kind::Line) return start + t * (end - start);
  return center + radius * cis(angle0 + t * (angle1 - angle0));
}

cplx Segment::velocity(double t) const {
  if (kind == Kind::Line) return end - start;
  const double a = angle0 + t * (angle1 - angle0);
  return cplx(0, 1) * radius * (angle1 - angle0) * cis(a);
}

double Segment::length() const {
  if (kind == Kind::Line) return std::abs(end - start);
  return radius * std::abs(angle1 - angle0);
}

double Segment::distance_to(cplx p) const {
  if (kind == Kind::Line) return point_segment_distance(p, start, end);
  const cplx d = p - center;
  const double lo = std::min(angle0, angle1), hi = std::max(angle0, angle1);
  if (hi - lo >= kTwoPi || std::abs(d) == 0.0) return std::abs(std::abs(d) - radius);
  double a = std::arg(d);
  while (a < lo) a += kTwoPi;
  while (a > lo + kTwoPi) a -= kTwoPi;
  if (a <= hi) return std::abs(std::abs(d) - radius);
  return std::min(std::abs(p - start), std::abs(p - end));
}

FiberPath FiberPath::then(const FiberPath& other) const {
  FiberPath r = *this;
  const cplx shift = end() - other.start();
  for (Segment s : other.segments) {
    s.start += shift;
    s.end += shift;
    s.center += shift;
    r.segments.push_back(s);
  }
  r.m += other.m;
  r.n += other.n;
  for (const auto& [a, w] : other.winding) r.winding[a] += w;
  return r;
}

cplx parse_complex(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw PathError("empty complex number");
  auto number = [&](const std::string& part) {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      throw PathError("malformed complex number '" + text + "'");
    }
    if (used != part.size()) throw PathError("malformed complex number '" + text + "'");
    return v;
  };
  if (s.back() != 'i') return {number(s), 0.0};
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t i = 1; i < s.size(); ++i)
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') split = i;
  if (split == std::string::npos) return {0.0, number(s)};
  return {number(s.substr(0, split)), number(s.substr(split))};
}

FiberPath FiberPath::parse(const std::string& text, cplx tau) {
  FiberPath p;
  p.tau = tau;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    std::vector<std::string> args;
    for (std::string a; ls >> a;) args.push_back(a);
    try {
      if (kind == "L" && args.size() == 2) {
        p.segments.push_back(Segment::line(parse_complex(args[0]), parse_complex(args[1])));
      } else if (kind == "C" && args.size() == 4) {
        p.segments.push_back(Segment::arc(parse_complex(args[0]), std::stod(args[1]), std::stod(args[2]), std::stod(args[3])));
      } else {
        throw PathError("expected 'L z0 z1' or 'C center radius a0 a1'");
      }
    } catch (const std::exception& e) {
      throw PathError(fmt::format("path line {}: {}", lineno, e.what()));
    }
  }
  if (p.segments.empty()) throw PathError("path has no segments");
  for (std::size_t i = 1; i < p.segments.size(); ++i)
    if (std::abs(p.segments[i].point(0.0) - p.segments[i - 1].point(1.0)) > 1e-9)
      throw PathError(fmt::format("path is not connected between segments {} and {}", i, i + 1));
  return p;
}

std::string FiberPath::to_text() const {
  std::string out;
  for (const auto& s : segments) {
    if (s.kind == Segment::Kind::Line)
      out += fmt::format("L {} {}\n", fmt_complex(s.start), fmt_complex(s.end));
    else
      out += fmt::format("C {} {:.17g} {:.17g} {:.17g}\n", fmt_complex(s.center), s.radius, s.angle0, s.angle1);
  }
  return out;
}

double torsion_margin(const FiberPath& path, int N) {
  const cplx tau = path.tau;
  double umin = INFINITY, umax = -INFINITY, vmin = INFINITY, vmax = -INFINITY;
  for (const auto& s : path.segments) {
    const double r = s.kind == Segment::Kind::Arc ? s.radius : 0.0;
    for (cplx p : {s.start, s.end, s.center}) {
      if (s.kind == Segment::Kind::Line && p == s.center) continue;
      for (cplx q : {p + r, p - r, p + cplx(0, r), p - cplx(0, r)}) {
        const double v = N * q.imag() / tau.imag();
        const double u = N * q.real() - v * tau.real();
        umin = std::min(umin, u);
        umax = std::max(umax, u);
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
      }
    }
  }
  std::vector<cplx> pts;
  for (long v = static_cast<long>(std::floor(vmin)) - 1; v <= static_cast<long>(std::ceil(vmax)) + 1; ++v)
    for (long u = static_cast<long>(std::floor(umin)) - 1; u <= static_cast<long>(std::ceil(umax)) + 1; ++u)
      pts.push_back((static_cast<double>(u) + static_cast<double>(v) * tau) / static_cast<double>(N));
  return margin_from(path, pts);
}

// ---------------------------------------------------------------- transport

namespace {

Series segment_transport(const Segment& seg, const FormFunction& form, int steps, int level, int degree, long& evals) {
  static const double c1 = 0.5 - std::sqrt(3.0) / 6.0, c2 = 0.5 + std::sqrt(3.0) / 6.0;
  static const double k = std::sqrt(3.0) / 12.0;
  Series T = Series::unit(level, degree);
  const double h = 1.0 / steps;
  for (int i = 0; i < steps; ++i) {
    const double t = i * h;
    const Series A1 = form(seg.point(t + c1 * h)) * seg.velocity(t + c1 * h);
    const Series A2 = form(seg.point(t + c2 * h)) * seg.velocity(t + c2 * h);
    evals += 2;
    // Fourth-order Magnus step for T' = T A.
    const Series omega = (A1 + A2) * (0.5 * h) + bracket(A1, A2) * (k * h * h);
    T = T * exp_series(omega);
  }
  return T;
}

}  // namespace

TransportResult chen_transport(const FiberPath& path, const FormFunction& form, int level, int degree,
                               const TransportOptions& opt) {
  TransportResult r;
  r.T = Series::unit(level, degree);
  r.degree_error.assign(static_cast<std::size_t>(degree) + 1, 0.0);
  const double share = opt.tolerance / static_cast<double>(path.segments.size());
  for (const auto& seg : path.segments) {
    if (seg.length() == 0.0) continue;
    int steps = std::max(4, static_cast<int>(std::ceil(opt.initial_steps * seg.length())));
    Series coarse = segment_transport(seg, form, steps, level, degree, r.evaluations);
    bool converged = false;
    for (int ref = 0; ref < opt.max_refinements; ++ref) {
      steps *= 2;
      Series fine = segment_transport(seg, form, steps, level, degree, r.evaluations);
      const Series diff = fine - coarse;
      const double d = diff.max_abs();
      coarse = std::move(fine);
      if (d <= share * (1.0 + coarse.max_abs())) {
        for (int k = 0; k <= degree; ++k)
          r.degree_error[static_cast<std::size_t>(k)] += diff.homogeneous(k).max_abs();
        converged = true;
        break;
      }
    }
    if (!converged) throw PathError("transport did not converge under step refinement");
    r.T = r.T * coarse;
  }
  r.log_T = log_series(r.T);
  return r;
}

TransportResult transport_inverse(const KZBConnection& conn, const FiberPath& path, const TransportOptions& opt) {
  const int N = conn.context().level;
  const double margin = torsion_margin(path, N);
  if (margin < 1.0 / (8.0 * N))
    throw PathError(fmt::format("path passes within {:.3g} of a torsion point (margin 1/(8N) required)", margin));
  const cplx tau = path.tau;
  return chen_transport(path, [&](cplx z) { return conn.dz_element(tau, z); }, N, conn.context().degree, opt);
}

FiberMonodromy fiber_monodromy(const KZBConnection& conn, const FiberPath& path, const TransportOptions& opt) {
  FiberMonodromy f;
  f.transport = transport_inverse(conn, path, opt);
  f.psi = bch(f.transport.log_T, conn.lie().X() * static_cast<double>(-path.m));
  f.theta = Automorphism::exp_ad(f.psi);
  return f;
}

cplx default_base_point(int N, cplx tau) { return (1.0 + tau) / (2.0 * N); }

FiberPath a_loop(int N, cplx tau, cplx z0) {
  (void)N;
  FiberPath p;
  p.tau = tau;
  p.segments.push_back(Segment::line(z0, z0 + 1.0));
  p.n = 1;
  return p;
}

FiberPath b_loop(int N, cplx tau, cplx z0) {
  (void)N;
  FiberPath p;
  p.tau = tau;
  p.segments.push_back(Segment::line(z0, z0 + tau));
  p.m = 1;
  return p;
}

FiberPath torsion_loop(int N, cplx tau, cplx z0, const TorsionPoint& a) {
  const cplx lift = a.xr() + a.yr() * tau;
  const double dN = N;
  // Along the row of cell centres, then the column, then into the cell.
  const cplx row = (static_cast<double>(a.x) + 0.5 + 0.5 * tau) / dN;
  const cplx centre = (static_cast<double>(a.x) + 0.5 + (static_cast<double>(a.y) + 0.5) * tau) / dN;
  const double r = 1.0 / (4.0 * dN);
  const double angle = std::arg(centre - lift);
  const cplx touch = lift + r * cis(angle);
  std::vector<cplx> way{z0, row, centre, touch};
  FiberPath p;
  p.tau = tau;
  for (std::size_t i = 0; i + 1 < way.size(); ++i)
    if (std::abs(way[i + 1] - way[i]) > 1e-15) p.segments.push_back(Segment::line(way[i], way[i + 1]));
  p.segments.push_back(Segment::arc(lift, r, angle, angle + kTwoPi));
  for (std::size_t i = way.size() - 1; i > 0; --i)
    if (std::abs(way[i] - way[i - 1]) > 1e-15) p.segments.push_back(Segment::line(way[i], way[i - 1]));
  p.winding[a] = 1;
  return p;
}

DegreeOneReport degree_one(const KZBConnection& conn, const FiberMonodromy& mono, const FiberPath& path) {
  const LieContext& lie = conn.lie();
  DegreeOneReport r;
  r.measured = mono.psi.homogeneous(1);
  r.expected_xy = lie.Y() * (kTwoPiI * (static_cast<double>(path.m) * path.tau + static_cast<double>(path.n))) -
                  lie.X() * static_cast<double>(path.m);
  const Alphabet& al = lie.alphabet();
  for (int g = 0; g < al.size(); ++g)
    if (al.is_t(g) && lie.admitted_generator(g))
      r.t_coefficient[al.point(g)] = r.measured.coeff(Word::letter(g)) / kTwoPiI;
  return r;
}

// ---------------------------------------------------------------- KZ side

TransportResult kz_transport(int N, int degree, const FiberPath& path, const TransportOptions& opt) {
  std::vector<cplx> poles{0.0};
  for (int k = 0; k < N; ++k) poles.push_back(cis(kTwoPi * k / N));
  const double margin = margin_from(path, poles);
  if (margin < 1.0 / (8.0 * N))
    throw PathError(fmt::format("path passes within {:.3g} of a KZ pole (margin 1/(8N) required)", margin));
  auto form = [&](cplx w) {
    const auto c = kz_form(N, w);
    Series s(N, degree);
    for (std::size_t j = 0; j < c.size(); ++j) s += Series::generator(N, degree, static_cast<int>(j), c[j]);
    return s;
  };
  return chen_transport(path, form, N, degree, opt);
}

Series kz_to_fiber(const LieContext& lie, const Series& kz) {
  std::vector<Series> images;
  for (int g = 0; g < lie.alphabet().size(); ++g) images.push_back(g <= lie.level() ? kz_substitute(lie, g) : lie.zero());
  return Automorphism::from_images(std::move(images)).apply(kz);
}

int degree_one_rank(const std::vector<Series>& elements, double tol) {
  if (elements.empty()) return 0;
  const Alphabet al(elements.front().level());
  Eigen::MatrixXcd M(static_cast<Eigen::Index>(elements.size()), al.size());
  for (std::size_t i = 0; i < elements.size(); ++i)
    for (int g = 0; g < al.size(); ++g) M(static_cast<Eigen::Index>(i), g) = elements[i].coeff(Word::letter(g));
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(M);
  lu.setThreshold(tol);
  return static_cast<int>(lu.rank());
}

}  // namespace kzb
