#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "strebel/strebel.hpp"

namespace strebel {

// ---- hyperelliptic family ----

/// a = 1, b = 2r + sqrt(4r^2 + 1), so that (b/a - a/b)/4 = r.
std::pair<double, double> solve_ab(double r);

struct OrderCertificate {
  SpherePoint point;  ///< on the base sphere
  int ramification = 2;
  int base_order = 0;
  int pulled_order = 0;
};

struct HyperellipticSpec {
  double r = 0.0;
  std::vector<SpherePoint> extra_branch;
  double a = 1.0, b = 1.0;
  QuadDiff base_diff;
  std::vector<OrderCertificate> certificate;
  int total_degree = 0;  ///< sum of pulled-back orders
};

/// Throws DomainError if branch points collide.
HyperellipticSpec build_hyperelliptic(double r, const std::vector<SpherePoint>& extra);

// ---- elliptic slope criterion ----

struct EllipticSlopeReport {
  std::vector<SpherePoint> branch_points;  ///< canonically sorted
  Complex omega1, omega2;  ///< lattice periods of dz / sqrt(prod (z - a_i))
  Complex tau;             ///< omega2 / omega1, Im > 0
  Complex c_prime;
  double direction = 0.0;  ///< leaf direction relative to omega1, in [0, pi)
  std::optional<std::pair<int, int>> rational_witness;
  int Q = 0;
  bool strebel = false;
};

/// Throws DomainError for repeated points, c' = 0 or Q < 1.
EllipticSlopeReport elliptic_strebel_test(const std::array<SpherePoint, 4>& pts, Complex c_prime, int Q);

/// Representative of tau in the standard fundamental domain.
Complex reduce_modular(Complex tau);

// ---- degree-4 cover ----

struct CoverSolution {
  double r = 0.0;
  Complex b1, b2, b3;
  Complex c0, c1, c2, c3;
  Complex c;                   ///< 1/2 + i r sqrt(3)
  std::array<Complex, 3> a;    ///< targets h(c), c, h^-1(c)
  double residual = 0.0;
  int converged_starts = 0;

  Poly p() const;  ///< z^4 + c3 z^3 + c2 z^2 + c1 z + c0
};

/// Targets (h(c), c, h^-1(c)) for c = 1/2 + i r sqrt(3).
std::array<Complex, 3> cover_targets(double r);
/// p(b_i) - a_i for the quartic built from b.
std::array<Complex, 3> cover_system(const std::array<Complex, 3>& b, const std::array<Complex, 3>& a);

/// Damped Newton from 64 shuffled grid starts (seed from STREBEL_SEED, default 0).
/// Throws DomainError unless 0 < r < 1/2, SolverFailure if no start converges.
CoverSolution cover_solver(double r, Exec exec = Exec::Parallel);
CoverSolution cover_solver(double r, unsigned long long seed, Exec exec);

/// Reduced system at b4 = 0, divided by b_i^2, evaluated at b.
std::array<double, 3> reduced_system_at(const std::array<double, 3>& b);
/// Exact Jacobian rows of the homogenized system at (1:1:1:0) in the chart
/// b3 = 1, variables (b1, b2, b4), as fractions num/den.
std::array<std::array<std::pair<long long, long long>, 3>, 3> homogenized_jacobian_at_fixture();

struct PeriodClass {
  double value = 0.0;
  std::string label;  ///< "L", "1-L", "L+(1-L)" or "other"
  int from = -1, to = -1;
};

struct PerimeterEntry {
  SpherePoint pole;
  double perimeter = 0.0;
  double multiple = 0.0;  ///< perimeter / 2
};

struct CoverPeriodReport {
  double L = 0.0;
  std::vector<PeriodClass> periods;
  std::vector<PerimeterEntry> perimeters;
  std::vector<PoleBoundary> boundaries;
  CriticalGraph graph;
  bool all_in_L_classes = false;  ///< every period within 1e-6 of L or 1-L
};

QuadDiff cover_differential(const CoverSolution& sol);

/// Throws DomainError if the residual is too large and NumericalError if
/// the pulled-back differential is not found to be Strebel.
CoverPeriodReport verify_cover_periods(const CoverSolution& sol, const TraceConfig& cfg);

// ---- preimage graphs ----

struct Intersection {
  int i = 0, j = 0;
  bool transverse = true;
};

struct PreimageGraph {
  int loops = 0;
  std::vector<Intersection> intersections;
  bool on_critical = false;
};

/// Throws DomainError for n < 1.
PreimageGraph build_preimage_graph(int n, bool on_critical);

/// Vertex and edge counts of the graph made of the loops cut at their
/// intersection points.
std::pair<int, int> vertex_edge_count(const PreimageGraph& g);

}  // namespace strebel
