#pragma once

#include <string>
#include <vector>

#include "strebel/flow.hpp"

namespace strebel {

enum class Exec { Parallel, Serial };

/// One critical trajectory with the exact vertices added to its polyline.
struct GraphEdge {
  Trajectory trajectory;
  std::vector<ChartPoint> polyline;  ///< starts at the source vertex
  int from = -1;                     ///< vertex index
  int to = -1;                       ///< vertex index, -1 unless it hit a vertex
  double angle = 0.0;                ///< launch direction in the source vertex chart
  double length = 0.0;               ///< flat length
  int orientation = 1;               ///< sqrt(w) taken positive along from -> to
};

enum class VerdictKind { Strebel, NotStrebelWitness, Undecided };

const char* to_string(VerdictKind v);

struct StrebelVerdict {
  VerdictKind kind = VerdictKind::Strebel;
  std::vector<int> edges;  ///< offending edge indices
  std::string diagnostic;
};

struct CriticalGraph {
  std::vector<DivisorEntry> vertices;  ///< zeros and simple poles
  std::vector<GraphEdge> edges;
  StrebelVerdict verdict;
  TraceConfig cfg;
};

/// Throws DomainError "not a Strebel candidate" for poles of order three or more.
CriticalGraph critical_graph(const QuadDiff& w, const TraceConfig& cfg, Exec exec = Exec::Parallel);

/// Max-min chordal distance between the two polylines.
double hausdorff(const std::vector<ChartPoint>& a, const std::vector<ChartPoint>& b);

/// Drops edges that retrace an earlier edge (same endpoints, Hausdorff < tol).
std::vector<GraphEdge> dedup_edges(const std::vector<GraphEdge>& edges, double tol);

/// Integral of sqrt(w) along a polyline that follows a leaf, branch positive
/// along travel. End segments may touch zeros or simple poles.
Complex period_integral(const QuadDiff& w, const std::vector<ChartPoint>& polyline);
Complex period_integral(const FlowField& field, const std::vector<ChartPoint>& polyline);

struct PeriodEntry {
  int edge = -1;
  int from = -1;
  int to = -1;
  double length = 0.0;
  int orientation = 1;
};

struct PeriodTable {
  std::vector<PeriodEntry> entries;
};

/// Lengths of edges joining two zeros. Throws DomainError unless the verdict is Strebel.
PeriodTable periods(const CriticalGraph& g, const QuadDiff& w);

/// Edge sides bounding the ring domain of one double pole.
struct PoleBoundary {
  SpherePoint pole;
  double perimeter = 0.0;
  std::vector<std::pair<int, int>> sides;  ///< (edge index, side +-1)
  double boundary_length = 0.0;
};

/// Assigns both sides of every finite edge to a double pole by following
/// the vertical leaf from the edge midpoint.
std::vector<PoleBoundary> pole_boundaries(const CriticalGraph& g, const QuadDiff& w);

/// Flat length along the segment from c (on Re z = 1/2, |Im z| <= sqrt(3)/2)
/// up to 1/2 + i sqrt(3)/2. Throws DomainError otherwise.
double ell(const QuadDiff& w, Complex c);

}  // namespace strebel
