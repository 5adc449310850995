#pragma once

#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "kzb/monodromy.hpp"
#include "kzb/report.hpp"
#include "kzb/special.hpp"
#include "kzbcli/config.hpp"

namespace kzbcli {

using kzb::CheckResult;
using kzb::cplx;

// Seeded (tau, z) samples: tau uniform in the configured box, z = u + v tau
// with u, v uniform in [0, 1) at distance >= margin from (1/N)(Z + Z tau).
std::vector<std::pair<cplx, cplx>> sample_points(const RunConfig& cfg, int count, double margin);

// Distance from z to the nearest point of (1/N)(Z + Z tau).
double torsion_distance(cplx z, cplx tau, int N);

// Heat equation per x-order 0..max_order at cfg.samples points, Q = cfg.qorder.
std::vector<CheckResult> heat_checks(const RunConfig& cfg, int max_order = 8);
// d_tau B - d_z A and [A, B] separately, and their sum.
std::vector<CheckResult> flatness_checks(const RunConfig& cfg);
// Translations (1,0), (0,1) and the generators of the selected subgroup.
std::vector<CheckResult> invariance_checks(const RunConfig& cfg);
// Torsion and zero-section residues by contour integration, and the
// commutation of the cusp residue with the residues along the singular fiber.
std::vector<CheckResult> residue_checks(const RunConfig& cfg);
std::vector<CheckResult> degeneration_checks(const RunConfig& cfg);
// delta([X, Y]) - sum_b delta(t_b) for m = 0..max_m and every admitted alpha.
std::vector<CheckResult> well_defined_checks(const RunConfig& cfg, int max_m = 4);
// Filtration shifts of the residues and automorphy factors.
std::vector<CheckResult> filtration_checks(const RunConfig& cfg);
// Ranks of L^r between graded pieces, for the cusp residue alone and with ad(t_0) added.
std::vector<CheckResult> sl2_checks(const RunConfig& cfg);

// A_{m, alpha} against -(m+1)/(2 pi i)^{m+1} G_{m+2, alpha} from the lattice sum with cutoff cfg.cutoff.
std::vector<CheckResult> eisenstein_checks(const RunConfig& cfg, int max_m, const std::vector<cplx>& taus);
// Properties of F at one point: theta route vs Fourier route, parity,
// ellipticity, symmetry, modularity and the heat equation.
std::vector<CheckResult> jacobi_checks(const RunConfig& cfg, cplx x, cplx z, cplx tau);

// Cache of q_N-expansions of G_{m, alpha} in the QSeries text format.
class QCache {
 public:
  explicit QCache(std::string dir) : dir_(std::move(dir)) {}
  std::string path(int m, const kzb::TorsionPoint& a, int Q) const;
  std::optional<kzb::QSeries> load(int m, const kzb::TorsionPoint& a, int Q) const;
  void store(int m, const kzb::TorsionPoint& a, const kzb::QSeries& s) const;
  // Loads or computes (and does not store).
  kzb::QSeries get(int m, const kzb::TorsionPoint& a, int Q, bool* hit = nullptr) const;
  // Writes all weights 2..max_weight and torsion points at level N; returns the file count.
  int build(int N, int max_weight, int Q) const;
  // One line per cached file: name, level, order.
  std::string inspect() const;

 private:
  std::string dir_;
};

// Standard loop names: "a", "b" or "t:x,y".
kzb::FiberPath standard_loop(const std::string& name, int N, cplx tau, cplx z0);

struct MonodromyOutcome {
  std::vector<CheckResult> records;
  std::vector<std::pair<std::string, std::string>> sections;
};
MonodromyOutcome monodromy_run(const RunConfig& cfg, const kzb::FiberPath& path);

}  // namespace kzbcli
