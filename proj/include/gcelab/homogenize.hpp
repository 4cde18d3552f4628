#pragma once

// Periodic ODEs that make a conformal factor on the base of a Sasakian
// fibration homogeneous, and the Reeb shift of commuting lifted translations
// on Nil^3.

#include <array>
#include <functional>
#include <vector>

namespace gcelab {

inline constexpr int kDefaultOdeSteps = 2048;

class PeriodicFunction {
 public:
  PeriodicFunction(std::function<double(double)> f, double period);
  /// Trigonometric interpolation of equally spaced samples f(k period / n).
  static PeriodicFunction from_samples(std::vector<double> samples, double period);

  double operator()(double t) const { return f_(t); }
  double period() const { return period_; }

  /// Periodic trapezoid rule with n nodes.
  double mean(int n = kDefaultOdeSteps) const;
  double min_value(int n = 4 * kDefaultOdeSteps) const;
  /// max |f(t + period) - f(t)| over n sample points.
  double periodicity_defect(int n = 256) const;

 private:
  std::function<double(double)> f_;
  double period_;
};

/// Values on the grid t_k = k h, h = period / steps, k = 0..steps (the last
/// sample repeats the first period point).
struct PeriodicSolution {
  double period = 0.0;
  double c = 0.0;
  std::vector<double> t;
  std::vector<double> values;
  /// |value(period) - value(0)| as produced by the integrator.
  double periodicity_residual = 0.0;
  /// max over the grid of the ODE defect, with the derivative taken by an
  /// 8th-order periodic central difference.
  double ode_residual = 0.0;
};

/// -alpha' = c - f with c = mean(f) and alpha of zero mean. Throws
/// Error(InvalidConformalFactor) when f is not positive or not periodic.
PeriodicSolution solve_flat_case(const PeriodicFunction& f, int steps = kDefaultOdeSteps);

/// (alpha(t) - alpha(-t)) / 2: the average of alpha with its pullback under
/// z |-> -z, a solution again when f is even.
PeriodicSolution symmetrize_flat_solution(const PeriodicSolution& s, const PeriodicFunction& f);

/// beta' - beta = c - f, periodic with period a0 = f.period().
PeriodicSolution solve_hyperbolic_case(const PeriodicFunction& f, double c,
                                       int steps = kDefaultOdeSteps);

/// Solution of beta' - beta = c - f from beta(0) = beta0 over [0, a0].
PeriodicSolution integrate_hyperbolic(const PeriodicFunction& f, double c, double beta0,
                                      int steps = kDefaultOdeSteps);

using Point2 = std::array<double, 2>;
using Point3 = std::array<double, 3>;

/// Horizontal lift of a closed or open polygon for lambda = dt + y dx - x dy.
struct HorizontalLiftPath {
  std::vector<Point2> base;
  std::vector<Point3> lifted;
  /// max |lambda(step)| / |step| at step midpoints.
  double horizontality_residual = 0.0;
};

/// `start` must lie over the first vertex; Error(InvalidParameter) otherwise.
HorizontalLiftPath lift_polygon(const std::vector<Point2>& vertices, Point3 start,
                                int steps_per_segment = 64);

/// Fiber shift of the horizontal lift of the loop V, W, -V, -W from the
/// origin; equals 2 det(V, W).
double nil_commutator_shift(Point2 V, Point2 W);

/// Same shift from the lifted automorphisms
/// (x, y, t) |-> (x + v1, y + v2, t + v1 y - v2 x), composed as
/// tau_V^-1 tau_W^-1 tau_V tau_W.
double nil_automorphism_commutator(Point2 V, Point2 W);

}  // namespace gcelab
