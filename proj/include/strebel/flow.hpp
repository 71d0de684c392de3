#pragma once

#include <optional>
#include <string>
#include <vector>

#include "strebel/qdiff.hpp"

namespace strebel {

struct TraceConfig {
  double step = 1e-3;         ///< flat-metric step
  double sing_radius = 1e-4;  ///< flat capture radius around zeros and simple poles
  double close_tol = 1e-5;
  double length_budget = 100.0;
  double chart_switch_radius = 4.0;

  /// Throws DomainError unless all fields are positive and close_tol < sing_radius.
  void validate() const;
};

enum class Chart { Z, W };  ///< W is the chart w = 1/z

struct ChartPoint {
  Chart chart = Chart::Z;
  Complex x;

  SpherePoint sphere() const;
  static ChartPoint from_sphere(const SpherePoint& p, Chart preferred = Chart::Z);
};

enum class Termination { HitSingular, Closed, BudgetExceeded, NumericalFailure };

const char* to_string(Termination t);

struct Trajectory {
  std::vector<ChartPoint> points;
  double flat_length = 0.0;
  Termination termination = Termination::BudgetExceeded;
  std::optional<SpherePoint> hit;  ///< set for HitSingular
  Complex start_direction;         ///< unit, in the chart of the first point
  std::string diagnostic;
};

/// Precomputed evaluation data for one differential in both charts.
class FlowField {
 public:
  explicit FlowField(const QuadDiff& w);

  struct Singular {
    SpherePoint point;
    int order = 0;
    Complex leading;  ///< local model coefficient in the point's own chart
    Poly num_hat, den_hat;  ///< f = x^order num_hat / den_hat, x the local offset
  };

  const QuadDiff& differential() const { return w_; }
  const std::vector<Singular>& singular() const { return sing_; }
  const std::vector<Singular>& double_poles() const { return doubles_; }

  /// f in the given chart.
  Complex eval(Chart c, Complex x) const;
  /// Flat distance from q to the nearest zero or simple pole (local model
  /// estimate) and that point's index in singular(); index -1 if none.
  std::pair<double, int> nearest_singular(const ChartPoint& q) const;
  /// f at offset x from a point of singular() or double_poles(), evaluated in
  /// factored form so that small offsets keep full relative accuracy.
  static Complex eval_near(const Singular& s, Complex x);
  /// Entry of singular() or double_poles() at p, or nullptr.
  const Singular* find(const SpherePoint& p) const;

 private:
  QuadDiff w_;
  RationalFn fz_, fw_;
  std::vector<Singular> sing_;
  std::vector<Singular> doubles_;
};

/// Extra knobs used internally for vertical leaves.
struct TraceOptions {
  /// If positive, stop with HitSingular once within this chordal distance of a double pole.
  double double_pole_capture = 0.0;
  /// Trace vertical instead of horizontal leaves.
  bool vertical = false;
};

/// Follows the horizontal leaf from z0 in direction dir (must satisfy
/// Re f(z0) dir^2 > 0). Throws DomainError on bad config or start point.
Trajectory trace(const QuadDiff& w, Complex z0, Complex dir, const TraceConfig& cfg);
Trajectory trace(const FlowField& field, const ChartPoint& start, Complex dir,
                 const TraceConfig& cfg, const TraceOptions& opt = {});

struct TraceRequest {
  ChartPoint start;
  Complex dir;
};

/// Batch tracing. The parallel version uses OpenMP; both give identical output.
std::vector<Trajectory> trace_all(const FlowField& field, const std::vector<TraceRequest>& reqs,
                                  const TraceConfig& cfg, const TraceOptions& opt = {});
std::vector<Trajectory> trace_all_serial(const FlowField& field,
                                         const std::vector<TraceRequest>& reqs,
                                         const TraceConfig& cfg, const TraceOptions& opt = {});

/// Integral of |f|^(1/2) |dz| along a polyline. Throws DomainError if a pole
/// lies within sing_radius (euclidean) of the path.
double flat_length(const QuadDiff& w, const std::vector<Complex>& path, double sing_radius = 1e-4);

/// Unit directions in which horizontal leaves leave p (in the w chart when p
/// is infinity). Throws DomainError for poles of order two or more.
std::vector<Complex> critical_directions(const QuadDiff& w, const SpherePoint& p);

/// Flat distance from the local model: (2/(k+2)) |c|^(1/2) |x|^((k+2)/2).
double model_flat_distance(int order, Complex leading, double euclidean);
/// Inverse of model_flat_distance.
double model_euclidean_radius(int order, Complex leading, double flat);

}  // namespace strebel
