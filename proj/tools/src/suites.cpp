#include "kzbcli/suites.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "kzb/connection.hpp"
#include "kzb/hodge.hpp"

namespace kzbcli {

using namespace kzb;
namespace fs = std::filesystem;

namespace {

std::string num(cplx v) { return fmt::format("{:.6g}{:+.6g}i", v.real(), v.imag()); }

KZBContext context_of(const RunConfig& cfg) {
  KZBContext ctx;
  ctx.level = cfg.level;
  ctx.subgroup = cfg.subgroup;
  ctx.degree = cfg.degree;
  ctx.qorder = 0;
  ctx.tolerance = cfg.tol;
  return ctx;
}

std::map<std::string, std::string> base_params(const RunConfig& cfg) {
  return {{"N", std::to_string(cfg.level)}, {"D", std::to_string(cfg.degree)}, {"subgroup", subgroup_name(cfg.subgroup)}};
}

cplx mobius(const Mat2& g, cplx tau) {
  return (static_cast<double>(g.a) * tau + static_cast<double>(g.b)) / (static_cast<double>(g.c) * tau + static_cast<double>(g.d));
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// (1 / 2 pi i) times the contour integral of b dz around c, trapezoid rule.
Series contour_residue(const KZBConnection& conn, cplx tau, cplx c, double radius, int points) {
  Series acc = conn.lie().zero();
  for (int k = 0; k < points; ++k) {
    const cplx e = std::polar(radius, 2.0 * kPi * (k + 0.5) / points);
    acc += conn.dz_element(tau, c + e) * (e / static_cast<double>(points));
  }
  return acc;
}

CheckResult integer_check(std::string name, std::map<std::string, std::string> params, int excess, std::string note = {}) {
  return make_check(std::move(name), std::move(params), static_cast<double>(std::max(0, excess)), 0.0, std::move(note));
}

}  // namespace

double torsion_distance(cplx z, cplx tau, int N) {
  const double v = N * z.imag() / tau.imag();
  const double u = N * z.real() - v * tau.real();
  double best = INFINITY;
  for (double du : {std::floor(u), std::ceil(u)})
    for (double dv : {std::floor(v), std::ceil(v)})
      for (double eu : {-1.0, 0.0, 1.0}) best = std::min(best, std::abs(z - (du + eu + dv * tau) / static_cast<double>(N)));
  return best;
}

std::vector<std::pair<cplx, cplx>> sample_points(const RunConfig& cfg, int count, double margin) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> re(cfg.tau_re_min, cfg.tau_re_max), im(cfg.tau_im_min, cfg.tau_im_max),
      unit(0.0, 1.0);
  std::vector<std::pair<cplx, cplx>> out;
  while (static_cast<int>(out.size()) < count) {
    const double tr = re(rng);
    const double ti = im(rng);
    const cplx tau(tr, ti);
    const double u = unit(rng);
    const double v = unit(rng);
    const cplx z = u + v * tau;
    if (torsion_distance(z, tau, cfg.level) >= margin) out.emplace_back(tau, z);
  }
  return out;
}

// ---------------------------------------------------------------- verify suites

std::vector<CheckResult> heat_checks(const RunConfig& cfg, int max_order) {
  std::vector<CheckResult> out;
  int i = 0;
  for (const auto& [tau, zz] : sample_points(cfg, cfg.samples, 0.0)) {
    // Keep z inside the strip where the Fourier terms are summed.
    const cplx z(zz.real() - std::floor(zz.real()) - 0.5, 0.35 * (2.0 * (zz.imag() / tau.imag()) - 1.0) * tau.imag());
    CheckResult r = verify_heat(z, tau, max_order, cfg.qorder, cfg.tol);
    r.name = "heat";
    r.params = {{"sample", fmt::format("{:02d}", i++)}, {"tau", num(tau)}, {"z", num(z)}, {"Q", std::to_string(cfg.qorder)},
                {"orders", std::to_string(max_order)}};
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CheckResult> flatness_checks(const RunConfig& cfg) {
  const KZBConnection conn(context_of(cfg));
  std::vector<CheckResult> out;
  int i = 0;
  for (const auto& [tau, z] : sample_points(cfg, cfg.samples, 1.0 / (8.0 * cfg.level))) {
    const Curvature c = conn.curvature(tau, z);
    auto p = base_params(cfg);
    p["sample"] = fmt::format("{:02d}", i++);
    p["tau"] = num(tau);
    p["z"] = num(z);
    out.push_back(make_check("flatness.d", p, c.exactness.max_abs(), cfg.tol));
    out.push_back(make_check("flatness.wedge", p, c.wedge.max_abs(), cfg.tol));
    out.push_back(make_check("flatness.total", p, c.total.max_abs(), cfg.tol));
  }
  return out;
}

std::vector<CheckResult> invariance_checks(const RunConfig& cfg) {
  const KZBConnection conn(context_of(cfg));
  struct Element {
    Mat2 g;
    int m, n;
    std::string label;
  };
  std::vector<Element> elements{{Mat2{}, 1, 0, "(1,0)"}, {Mat2{}, 0, 1, "(0,1)"}};
  for (const Mat2& g : subgroup_generators(cfg.subgroup, cfg.level)) elements.push_back({g, 0, 0, g.str()});
  std::vector<CheckResult> out;
  int i = 0;
  for (const auto& [tau, z] : sample_points(cfg, cfg.samples, 1.0 / (8.0 * cfg.level))) {
    for (const auto& e : elements) {
      auto p = base_params(cfg);
      p["sample"] = fmt::format("{:02d}", i);
      p["element"] = e.label;
      p["tau"] = num(tau);
      p["z"] = num(z);
      out.push_back(make_check("invariance", p, conn.invariance_residual(e.g, e.m, e.n, tau, z).max_abs(), cfg.tol));
    }
    ++i;
  }
  return out;
}

std::vector<CheckResult> residue_checks(const RunConfig& cfg) {
  const KZBConnection conn(context_of(cfg));
  const LieContext& lie = conn.lie();
  const int N = cfg.level;
  std::vector<CheckResult> out;
  const cplx tau = sample_points(cfg, 1, 0.0).front().first;
  const double radius = 1.0 / (4.0 * N);
  for (const auto& a : torsion_group(N)) {
    if (!a.is_zero() && !admits(cfg.subgroup, a)) continue;
    const cplx lift = a.xr() + a.yr() * tau;
    const Series numeric = contour_residue(conn, tau, lift, radius, 128);
    const Series expect = a.is_zero() ? restrict_zero_section(conn, tau).residue : residue_torsion(lie, a);
    auto p = base_params(cfg);
    p["alpha"] = a.str();
    p["tau"] = num(tau);
    out.push_back(make_check(a.is_zero() ? "residue.zero-section" : "residue.torsion", p, distance(numeric, expect), cfg.tol));
  }
  // Cusp at infinity: the limit of the d tau coefficient against the closed form,
  // and commutation with the residues along the singular fiber.
  const double width = cfg.subgroup == Subgroup::Full ? N : 1;
  const cplx far(0.1, 6.0 * N);
  for (bool half : {true, false}) {
    const Derivation L = residue_cusp(lie, Mat2{}, half);
    auto p = base_params(cfg);
    p["normalization"] = half ? "half" : "full";
    if (half) {
      const Derivation limit = conn.omega(far, cplx(0.13, 0.2)).A * (width / kTwoPiI);
      out.push_back(make_check("residue.cusp-limit", p, distance(limit, L), cfg.tol, "at Im tau = 6N"));
    }
    for (int k = 0; k < N; ++k) {
      p["zeta"] = std::to_string(k);
      out.push_back(make_check("residue.commute", p, commutator(L, Derivation::inner(lie.t({k, 0, N}))).max_abs(), 1e-10));
    }
  }
  return out;
}

std::vector<CheckResult> degeneration_checks(const RunConfig& cfg) {
  CheckResult r = degeneration_check(LieContext(cfg.level, cfg.degree, cfg.subgroup));
  r.name = "degeneration";
  for (auto& [k, v] : base_params(cfg)) r.params[k] = v;
  return {r};
}

std::vector<CheckResult> well_defined_checks(const RunConfig& cfg, int max_m) {
  const LieContext lie(cfg.level, cfg.degree, cfg.subgroup);
  std::vector<CheckResult> out;
  for (int m = 0; m <= max_m; ++m)
    for (const auto& a : torsion_group(cfg.level)) {
      auto p = base_params(cfg);
      p["m"] = std::to_string(m);
      p["alpha"] = a.str();
      out.push_back(make_check("well-defined", p, delta_consistency_defect(lie, m, a).max_abs(), 0.0));
    }
  return out;
}

std::vector<CheckResult> filtration_checks(const RunConfig& cfg) {
  const KZBConnection conn(context_of(cfg));
  const LieContext& lie = conn.lie();
  std::vector<CheckResult> out;
  auto record = [&](const std::string& what, std::map<std::string, std::string> p, const Shift& s, int f, int w, int m) {
    p["object"] = what;
    p["levels"] = fmt::format("F{} W{} M{}", s.F, s.W, s.M);
    out.push_back(integer_check("filtration.F", p, f - s.F, fmt::format("need F >= {}", f)));
    out.push_back(integer_check("filtration.W", p, s.W - w, fmt::format("need W <= {}", w)));
    out.push_back(integer_check("filtration.M", p, s.M - m, fmt::format("need M <= {}", m)));
  };
  for (const auto& a : torsion_group(cfg.level)) {
    if (a.is_zero() || !admits(cfg.subgroup, a)) continue;
    auto p = base_params(cfg);
    p["alpha"] = a.str();
    record("L_z", p, derivation_filtration_levels(Derivation::inner(residue_torsion(lie, a))), -1, -2, -2);
  }
  for (const Mat2& g : {Mat2{}, Mat2{0, -1, 1, 0}}) {
    auto p = base_params(cfg);
    p["gamma"] = g.str();
    record("L_q", p, derivation_filtration_levels(residue_cusp(lie, g)), -1, 0, -2);
  }
  std::vector<std::tuple<Mat2, int, int>> elements{{Mat2{}, 1, 0}, {Mat2{}, 0, 1}};
  for (const Mat2& g : subgroup_generators(cfg.subgroup, cfg.level)) elements.emplace_back(g, 0, 0);
  int i = 0;
  for (const auto& [tau, z] : sample_points(cfg, cfg.samples, 1.0 / (8.0 * cfg.level))) {
    for (const auto& [g, m, n] : elements) {
      auto p = base_params(cfg);
      p["sample"] = fmt::format("{:02d}", i);
      p["element"] = fmt::format("{}({},{})", g.str(), m, n);
      record("automorphy", p, automorphism_filtration_levels(conn.automorphy(g, m, n, tau, z).map), 0, 0, 0);
    }
    ++i;
  }
  return out;
}

std::vector<CheckResult> sl2_checks(const RunConfig& cfg) {
  const LieContext lie(cfg.level, cfg.degree, cfg.subgroup);
  const Derivation Lq = residue_cusp(lie, Mat2{});
  const Derivation Lw = Derivation::inner(restrict_singular_fiber(lie).pole[0]);
  std::vector<CheckResult> out;
  for (const auto& [label, L] : {std::pair{std::string("L_q"), Lq}, std::pair{std::string("L_q+L_w"), Lq + Lw}}) {
    const Sl2Report rep = sl2_iso_check(lie, L, cfg.degree, cfg.degree);
    auto p = base_params(cfg);
    p["map"] = label;
    if (!rep.precondition) {
      out.push_back(make_check("sl2.precondition", p, 1.0, 0.0, rep.violation));
      continue;
    }
    out.push_back(make_check("sl2.precondition", p, 0.0, 0.0, fmt::format("W shift {}, M shift {}", rep.shift.W, rep.shift.M)));
    for (const Sl2Record& r : rep.records) {
      auto q = p;
      q["weight"] = fmt::format("{:02d}", r.weight);
      q["r"] = fmt::format("{:02d}", r.r);
      q["dims"] = fmt::format("{}->{}", r.dim_source, r.dim_target);
      q["rank"] = std::to_string(r.rank);
      const double defect = std::abs(r.dim_source - r.rank) + std::abs(r.dim_target - r.rank);
      out.push_back(make_check("sl2.rank", q, defect, 0.0));
    }
  }
  return out;
}

std::vector<CheckResult> eisenstein_checks(const RunConfig& cfg, int max_m, const std::vector<cplx>& taus) {
  std::vector<CheckResult> out;
  for (const cplx tau : taus)
    for (const auto& a : torsion_group(cfg.level)) {
      const std::vector<cplx> A = A_coeffs(max_m, a, tau);
      for (int m = 0; m <= max_m; ++m) {
        const cplx scale = -static_cast<double>(m + 1) / std::pow(kTwoPiI, m + 1);
        cplx G;
        std::string route;
        if (m == 0) {
          G = eisenstein(2, a, tau);
          route = "q-expansion";
        } else {
          G = eisenstein_lattice(m + 2, a, tau, cfg.cutoff).value;
          route = "lattice";
        }
        const cplx expect = scale * G;
        const double residual = std::abs(A[static_cast<std::size_t>(m)] - expect);
        const double allowed = 1e-6 * std::abs(expect) + 1e-12;
        std::map<std::string, std::string> p{{"N", std::to_string(cfg.level)}, {"alpha", a.str()}, {"m", std::to_string(m)},
                                             {"tau", num(tau)}, {"route", route}};
        CheckResult r = make_check("eisenstein.A", p, residual, allowed);
        r.note = fmt::format("relative {:.2e}", std::abs(expect) > 0 ? residual / std::abs(expect) : residual);
        out.push_back(std::move(r));
      }
    }
  return out;
}

std::vector<CheckResult> jacobi_checks(const RunConfig& cfg, cplx x, cplx z, cplx tau) {
  std::vector<CheckResult> out;
  std::map<std::string, std::string> p{{"x", num(x)}, {"z", num(z)}, {"tau", num(tau)}};
  const cplx F = F_numeric(x, z, tau);
  const double tol = std::max(cfg.tol, 1e-9);
  out.push_back(make_check("jacobi.fourier", p, rel(F_laurent(z, tau, 24).F.evaluate(x), F), tol, "Laurent in x to order 24"));
  out.push_back(make_check("jacobi.parity", p, rel(F_numeric(-x, -z, tau), -F), tol));
  out.push_back(make_check("jacobi.period-1", p, rel(F_numeric(x, z + 1.0, tau), F), tol));
  out.push_back(make_check("jacobi.period-tau", p, rel(F_numeric(x, z + tau, tau), std::exp(-x) * F), tol));
  out.push_back(make_check("jacobi.symmetry", p, rel(F_numeric(kTwoPiI * z, x / kTwoPiI, tau), F), tol));
  for (const Mat2& g : {Mat2{0, -1, 1, 0}, Mat2{1, 1, 0, 1}, Mat2{2, 1, 1, 1}}) {
    const cplx j = static_cast<double>(g.c) * tau + static_cast<double>(g.d);
    const cplx lhs = F_numeric(x / j, z / j, mobius(g, tau));
    const cplx rhs = j * std::exp(static_cast<double>(g.c) * z * x / j) * F;
    auto q = p;
    q["gamma"] = g.str();
    out.push_back(make_check("jacobi.modularity", q, rel(lhs, rhs), tol));
  }
  CheckResult heat = verify_heat(z, tau, 8, cfg.qorder, cfg.tol);
  heat.name = "jacobi.heat";
  heat.params = p;
  heat.params["Q"] = std::to_string(cfg.qorder);
  out.push_back(std::move(heat));
  return out;
}

// ---------------------------------------------------------------- cache

std::string QCache::path(int m, const TorsionPoint& a, int Q) const {
  return (fs::path(dir_) / fmt::format("G_m{}_N{}_x{}_y{}_Q{}.qseries", m, a.N, a.x, a.y, Q)).string();
}

std::optional<QSeries> QCache::load(int m, const TorsionPoint& a, int Q) const {
  std::ifstream in(path(m, a, Q));
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  return QSeries::from_text(ss.str());
}

void QCache::store(int m, const TorsionPoint& a, const QSeries& s) const {
  fs::create_directories(dir_);
  std::ofstream out(path(m, a, s.order()));
  if (!out) throw std::runtime_error("cannot write cache file " + path(m, a, s.order()));
  out << s.to_text();
}

QSeries QCache::get(int m, const TorsionPoint& a, int Q, bool* hit) const {
  if (auto s = load(m, a, Q)) {
    if (hit) *hit = true;
    return *s;
  }
  if (hit) *hit = false;
  return eisenstein_qN(m, a, Q);
}

int QCache::build(int N, int max_weight, int Q) const {
  int count = 0;
  for (int m = 2; m <= max_weight; ++m)
    for (const auto& a : torsion_group(N)) {
      store(m, a, eisenstein_qN(m, a, Q));
      ++count;
    }
  return count;
}

std::string QCache::inspect() const {
  std::vector<std::string> lines;
  if (fs::is_directory(dir_))
    for (const auto& e : fs::directory_iterator(dir_)) {
      if (e.path().extension() != ".qseries") continue;
      std::ifstream in(e.path());
      std::string tag;
      int N = 0, Q = 0;
      in >> tag >> N >> Q;
      lines.push_back(fmt::format("{} N={} Q={}", e.path().filename().string(), N, Q));
    }
  std::sort(lines.begin(), lines.end());
  std::string s;
  for (const auto& l : lines) s += l + "\n";
  return s;
}

// ---------------------------------------------------------------- monodromy

FiberPath standard_loop(const std::string& name, int N, cplx tau, cplx z0) {
  if (name == "a") return a_loop(N, tau, z0);
  if (name == "b") return b_loop(N, tau, z0);
  int x = 0, y = 0;
  if (std::sscanf(name.c_str(), "t:%d,%d", &x, &y) == 2) {
    const TorsionPoint a(x, y, N);
    if (a.is_zero()) throw PathError("the zero section is not a loop generator");
    return torsion_loop(N, tau, z0, a);
  }
  throw PathError("unknown loop '" + name + "' (expected a, b or t:x,y)");
}

MonodromyOutcome monodromy_run(const RunConfig& cfg, const FiberPath& path) {
  const KZBConnection conn(context_of(cfg));
  TransportOptions opt;
  opt.tolerance = std::min(cfg.tol, 1e-9);
  const FiberMonodromy mono = fiber_monodromy(conn, path, opt);
  MonodromyOutcome o;
  auto p = base_params(cfg);
  p["tau"] = num(path.tau);
  p["m"] = std::to_string(path.m);
  p["n"] = std::to_string(path.n);
  o.records.push_back(make_check("monodromy.group-like", p, lie_defect(mono.psi), 1e-8));
  double quad = 0.0;
  for (double e : mono.transport.degree_error) quad = std::max(quad, e);
  o.records.push_back(make_check("monodromy.quadrature", p, quad, cfg.tol, fmt::format("{} evaluations", mono.transport.evaluations)));
  const DegreeOneReport d = degree_one(conn, mono, path);
  Series xy = d.measured;
  for (const auto& [a, c] : d.t_coefficient) xy -= conn.lie().t(a) * (c * kTwoPiI);
  o.records.push_back(make_check("monodromy.degree-one-xy", p, distance(xy, d.expected_xy), 1e-6,
                                 "2 pi i (m tau + n) Y - m X"));
  std::string table;
  for (const auto& [a, c] : d.t_coefficient) table += fmt::format("{} {:.12f} {:.12f}\n", a.str(), c.real(), c.imag());
  o.sections.emplace_back("t-coefficients", table);
  o.sections.emplace_back("psi", mono.psi.pruned(1e-14).to_text());
  o.sections.emplace_back("path", path.to_text());
  return o;
}

}  // namespace kzbcli
