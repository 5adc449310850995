#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "kzb/connection.hpp"
#include "kzbcli/report.hpp"
#include "kzbcli/suites.hpp"

using namespace kzbcli;
using kzb::cplx;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

cplx complex_arg(const std::string& s, const char* what) {
  try {
    return kzb::parse_complex(s);
  } catch (const kzb::PathError& e) {
    throw ConfigError(fmt::format("--{}: {}", what, e.what()));
  }
}

void require_upper_half(cplx tau) {
  if (!(tau.imag() > 0)) throw ConfigError("tau must lie in the upper half plane");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const Report& rep, const std::string& out, const std::string& json) {
  const std::string text = rep.to_text();
  std::cout << text;
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << text;
  }
  const std::string json_path = !json.empty() ? json : (out.empty() ? std::string() : out + ".json");
  if (!json_path.empty()) {
    std::ofstream f(json_path);
    if (!f) throw std::runtime_error("cannot write " + json_path);
    f << rep.to_json();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"KZB connection: special functions, connection form, monodromy and filtration checks"};
  app.fallthrough();
  app.require_subcommand(1);
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_config("--config", "", "flat key = value configuration file; flags of the same names override it");

  RunConfig cfg;
  std::string subgroup = "full";
  std::string json;
  app.add_option("--level", cfg.level, "level N");
  app.add_option("--subgroup", subgroup, "full, gamma1 or sl2z")->check(CLI::IsMember({"full", "gamma1", "sl2z"}));
  app.add_option("--degree", cfg.degree, "truncation degree D");
  app.add_option("--qorder", cfg.qorder, "number of q-terms Q");
  app.add_option("--cutoff", cfg.cutoff, "lattice sum cutoff K");
  app.add_option("--tol", cfg.tol, "tolerance");
  app.add_option("--seed", cfg.seed, "random seed for sample points");
  app.add_option("--samples", cfg.samples, "number of sample points");
  app.add_option("--tau-re-min", cfg.tau_re_min);
  app.add_option("--tau-re-max", cfg.tau_re_max);
  app.add_option("--tau-im-min", cfg.tau_im_min);
  app.add_option("--tau-im-max", cfg.tau_im_max);
  app.add_option("--cache-dir", cfg.cache_dir, "directory of cached q-expansions");
  app.add_option("--out", cfg.out, "write the report here (and a JSON mirror to <out>.json)");
  app.add_option("--json", json, "write the JSON mirror here");

  std::string tau_s = "0.1+1.1i", z_s = "0.23+0.31i", x_s = "0.3+0.1i";
  int weight = 4;
  auto* eis = app.add_subcommand("eisenstein", "values and q-expansions of G_{m,alpha}, checked against lattice sums");
  eis->add_option("--weight", weight, "largest weight");
  eis->add_option("--tau", tau_s);

  auto* jac = app.add_subcommand("jacobi", "evaluate F(x, z, tau) and check its properties");
  jac->add_option("--x", x_s);
  jac->add_option("--z", z_s);
  jac->add_option("--tau", tau_s);

  auto* omg = app.add_subcommand("omega", "evaluate and serialize the connection form at a point");
  omg->add_option("--z", z_s);
  omg->add_option("--tau", tau_s);

  std::string suite;
  auto* ver = app.add_subcommand("verify", "run a verification suite");
  ver->add_option("suite", suite, "heat, flatness, invariance, residues, degeneration, sl2, well-defined, filtration or all")
      ->required()
      ->check(CLI::IsMember({"heat", "flatness", "invariance", "residues", "degeneration", "sl2", "well-defined", "filtration", "all"}));

  std::string path_file, loop, z0_s;
  auto* mon = app.add_subcommand("monodromy", "transport along a loop in the fiber over tau");
  mon->add_option("--path", path_file, "path file (L z0 z1 / C center radius a0 a1 per line)");
  mon->add_option("--loop", loop, "standard loop: a, b or t:x,y");
  mon->add_option("--tau", tau_s);
  mon->add_option("--z0", z0_s, "base point of a standard loop");

  std::string action;
  auto* cache = app.add_subcommand("cache", "build or inspect the q-expansion cache");
  cache->add_option("action", action, "build or inspect")->required()->check(CLI::IsMember({"build", "inspect"}));
  cache->add_option("--weight", weight, "largest weight to build");

  try {
    app.parse(argc, argv);
    cfg.subgroup = kzb::parse_subgroup(subgroup);
    cfg.validate();
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  Report rep;
  rep.config = cfg;
  try {
    if (*eis) {
      const cplx tau = complex_arg(tau_s, "tau");
      require_upper_half(tau);
      if (weight < 2) throw ConfigError("--weight must be at least 2");
      rep.command = "eisenstein";
      const QCache qc(cfg.cache_dir);
      std::string values;
      int hits = 0;
      for (int m = 2; m <= weight; ++m)
        for (const auto& a : kzb::torsion_group(cfg.level)) {
          bool hit = false;
          const kzb::QSeries s = qc.get(m, a, cfg.qorder, &hit);
          hits += hit ? 1 : 0;
          const auto v = s.evaluate(tau);
          values += fmt::format("m={} alpha={} value={:.15e}{:+.15e}i tail={:.2e} cusp={:.15e}{:+.15e}i\n", m, a.str(),
                                v.value.real(), v.value.imag(), v.tail, s.a[0].real(), s.a[0].imag());
          if (m >= 3) {
            const cplx lattice = kzb::eisenstein_lattice(m, a, tau, cfg.cutoff).value;
            rep.records.push_back(kzb::make_check(
                "eisenstein.routes", {{"N", std::to_string(cfg.level)}, {"alpha", a.str()}, {"m", std::to_string(m)}},
                std::abs(lattice - v.value), 1e-6 * std::abs(lattice) + 1e-12 + v.tail));
          }
        }
      rep.add(eisenstein_checks(cfg, weight - 2, {tau}));
      rep.sections.emplace_back("values", values);
      std::cerr << fmt::format("cache: {} hits\n", hits);
    } else if (*jac) {
      const cplx tau = complex_arg(tau_s, "tau");
      require_upper_half(tau);
      const cplx x = complex_arg(x_s, "x"), z = complex_arg(z_s, "z");
      rep.command = "jacobi";
      rep.add(jacobi_checks(cfg, x, z, tau));
      const kzb::JacobiLaurent J = kzb::F_laurent(z, tau, cfg.degree);
      std::string coeffs = fmt::format("value {:.15e}{:+.15e}i\n", kzb::F_numeric(x, z, tau).real(), kzb::F_numeric(x, z, tau).imag());
      for (int k = -1; k <= cfg.degree; ++k) {
        const cplx c = k < 0 ? J.F.residue() : J.F.at(k);
        coeffs += fmt::format("x^{} {:.15e}{:+.15e}i\n", k, c.real(), c.imag());
      }
      rep.sections.emplace_back("laurent", coeffs);
    } else if (*omg) {
      const cplx tau = complex_arg(tau_s, "tau");
      require_upper_half(tau);
      const cplx z = complex_arg(z_s, "z");
      if (torsion_distance(z, tau, cfg.level) < 1e-6) throw ConfigError("z is at an N-torsion point");
      rep.command = "omega";
      kzb::KZBContext ctx{cfg.level, cfg.subgroup, cfg.degree, 0, cfg.tol};
      const kzb::KZBConnection conn(ctx);
      const kzb::ConnectionValue v = conn.omega(tau, z);
      rep.sections.emplace_back("dtau", v.A.to_text());
      rep.sections.emplace_back("dz", v.b_element.pruned(0.0).to_text());
    } else if (*ver) {
      rep.command = "verify " + suite;
      const bool all = suite == "all";
      if (all || suite == "heat") rep.add(heat_checks(cfg));
      if (all || suite == "flatness") rep.add(flatness_checks(cfg));
      if (all || suite == "invariance") rep.add(invariance_checks(cfg));
      if (all || suite == "residues") rep.add(residue_checks(cfg));
      if (all || suite == "degeneration") rep.add(degeneration_checks(cfg));
      if (all || suite == "sl2") rep.add(sl2_checks(cfg));
      if (all || suite == "well-defined") rep.add(well_defined_checks(cfg, std::min(4, cfg.degree)));
      if (suite == "filtration") rep.add(filtration_checks(cfg));
    } else if (*mon) {
      const cplx tau = complex_arg(tau_s, "tau");
      require_upper_half(tau);
      if (path_file.empty() == loop.empty()) throw ConfigError("give exactly one of --path and --loop");
      kzb::FiberPath path;
      if (!path_file.empty()) {
        try {
          path = kzb::FiberPath::parse(read_file(path_file), tau);
        } catch (const kzb::PathError& e) {
          throw ConfigError(e.what());
        }
        const cplx shift = path.end() - path.start();
        // Lift data from the endpoint displacement m tau + n.
        const double m = shift.imag() / tau.imag();
        const double n = shift.real() - m * tau.real();
        if (std::abs(m - std::round(m)) > 1e-9 || std::abs(n - std::round(n)) > 1e-9)
          throw ConfigError("path does not close up in the fiber (end - start is not in Z + Z tau)");
        path.m = static_cast<int>(std::lround(m));
        path.n = static_cast<int>(std::lround(n));
      } else {
        const cplx z0 = z0_s.empty() ? kzb::default_base_point(cfg.level, tau) : complex_arg(z0_s, "z0");
        try {
          path = standard_loop(loop, cfg.level, tau, z0);
        } catch (const kzb::PathError& e) {
          throw ConfigError(e.what());
        }
      }
      rep.command = "monodromy";
      MonodromyOutcome o = monodromy_run(cfg, path);
      rep.add(std::move(o.records));
      rep.sections = std::move(o.sections);
    } else if (*cache) {
      const QCache qc(cfg.cache_dir);
      rep.command = "cache " + action;
      if (action == "build") {
        const int top = std::max(weight, cfg.degree + 2);
        const int n = qc.build(cfg.level, top, cfg.qorder);
        std::cerr << fmt::format("cache: wrote {} files to {}\n", n, cfg.cache_dir);
      }
      rep.sections.emplace_back("files", qc.inspect());
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    rep.records.push_back(kzb::make_check("error", {}, INFINITY, 0.0, e.what()));
  }

  rep.sort();
  try {
    emit(rep, cfg.out, json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return rep.pass() ? kExitPass : kExitFail;
}
