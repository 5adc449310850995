#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "kzb/connection.hpp"

namespace kzb {

// Line segment or circular arc, parametrized by t in [0, 1].
struct Segment {
  enum class Kind { Line, Arc } kind = Kind::Line;
  cplx start, end;       // line
  cplx center;           // arc
  double radius = 0.0;
  double angle0 = 0.0, angle1 = 0.0;

  static Segment line(cplx a, cplx b);
  static Segment arc(cplx center, double radius, double angle0, double angle1);
  cplx point(double t) const;
  cplx velocity(double t) const;  // d point / dt
  double length() const;
  // Smallest distance from the segment to p.
  double distance_to(cplx p) const;
};

// A path in the z-plane of the fiber over tau (or in the w-plane for KZ).
// For loops in the fiber, the lift ends at start + m tau + n; the declared
// winding numbers around the lifted torsion points are kept for reports.
struct FiberPath {
  cplx tau{0.0, 1.0};
  std::vector<Segment> segments;
  int m = 0, n = 0;
  std::map<TorsionPoint, int> winding;

  cplx start() const { return segments.front().point(0.0); }
  cplx end() const { return segments.back().point(1.0); }
  // Concatenation: first this path, then other translated to start at end().
  FiberPath then(const FiberPath& other) const;

  // One segment per line: "L z_start z_end" or "C center radius angle_start angle_end",
  // complex numbers written re+imi (for example 0.1-0.25i). '#' starts a comment.
  static FiberPath parse(const std::string& text, cplx tau);
  std::string to_text() const;
};

class PathError : public std::domain_error {
 public:
  explicit PathError(const std::string& what) : std::domain_error(what) {}
};

// Parse a complex number in the form re+imi, re, or imi.
cplx parse_complex(const std::string& s);

// Distance from the path to the nearest point of (1/N)(Z + Z tau).
double torsion_margin(const FiberPath& path, int N);

struct TransportOptions {
  double tolerance = 1e-10;
  int initial_steps = 8;   // per unit of path length, at least 4 per segment
  int max_refinements = 12;
};

struct TransportResult {
  Series T;      // Chen series 1 + int w + int w w + ...
  Series log_T;  // its logarithm, a Lie series
  std::vector<double> degree_error;  // change per degree under the last refinement
  long evaluations = 0;
};

using FormFunction = std::function<Series(cplx)>;

// Chen series of the element-valued form w(z) dz along the path, solving
// T' = T w(z(t)) z'(t) with the 4th-order two-point Magnus step and halving
// the step until two refinements agree to the tolerance.
TransportResult chen_transport(const FiberPath& path, const FormFunction& form, int level, int degree,
                               const TransportOptions& opt = {});

// Transport of the dz-part of the connection form in the fiber over path.tau.
TransportResult transport_inverse(const KZBConnection& conn, const FiberPath& path, const TransportOptions& opt = {});

struct FiberMonodromy {
  TransportResult transport;
  Series psi;           // log(T e^{-m X})
  Automorphism theta;   // Ad(T e^{-m X})
};
FiberMonodromy fiber_monodromy(const KZBConnection& conn, const FiberPath& path, const TransportOptions& opt = {});

// Standard loops based at z0: the a-loop lifts to z0 -> z0 + 1, the b-loop to
// z0 -> z0 + tau, and the torsion loop runs between cell centres to a circle of
// radius 1/(4N) around the lift x + y tau (0 <= x, y < 1) of alpha.
cplx default_base_point(int N, cplx tau);
FiberPath a_loop(int N, cplx tau, cplx z0);
FiberPath b_loop(int N, cplx tau, cplx z0);
FiberPath torsion_loop(int N, cplx tau, cplx z0, const TorsionPoint& a);

// Expected degree-one part of psi for the standard loops from residue calculus
// and the quasi-periodicity of F: Y and X parts 2 pi i (m tau + n) Y - m X, and
// t_a coefficients 2 pi i (w_a - y_a) on the a-loop, 2 pi i (x_a + k_a) on the
// b-loop (k_a an integer fixed by the path), 2 pi i on a torsion loop.
struct DegreeOneReport {
  Series measured;
  Series expected_xy;  // 2 pi i (m tau + n) Y - m X
  std::map<TorsionPoint, cplx> t_coefficient;  // measured / (2 pi i)
};
DegreeOneReport degree_one(const KZBConnection& conn, const FiberMonodromy& mono, const FiberPath& path);

// KZ side. Words use letter 0 for e_0 and letter k + 1 for e_{zeta^k}, inside
// the level-N alphabet (which has at least N + 1 letters).
TransportResult kz_transport(int N, int degree, const FiberPath& path, const TransportOptions& opt = {});
// The substitution homomorphism applied to a KZ series.
Series kz_to_fiber(const LieContext& lie, const Series& kz);

// Rank of the matrix whose rows are the degree-one coefficient vectors.
int degree_one_rank(const std::vector<Series>& elements, double tol = 1e-8);

}  // namespace kzb
