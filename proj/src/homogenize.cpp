#include "gcelab/homogenize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gcelab/error.hpp"

namespace gcelab {

namespace {

constexpr double kPeriodicityTolerance = 1e-8;

// 8th-order central first-derivative stencil on a periodic grid.
constexpr double kStencil[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};

std::vector<double> periodic_derivative(const std::vector<double>& v, double h) {
  const int n = static_cast<int>(v.size());
  std::vector<double> d(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = 1; k <= 4; ++k) {
      s += kStencil[k - 1] * (v[(i + k) % n] - v[((i - k) % n + n) % n]);
    }
    d[i] = s / h;
  }
  return d;
}

void require_conformal_factor(const PeriodicFunction& f) {
  const double defect = f.periodicity_defect();
  if (defect > kPeriodicityTolerance) {
    throw Error(ErrorCode::InvalidConformalFactor,
                "function is not periodic (defect " + std::to_string(defect) + ")");
  }
  const double lo = f.min_value();
  if (!(lo > 0.0)) {
    throw Error(ErrorCode::InvalidConformalFactor,
                "conformal factor must be positive (minimum " + std::to_string(lo) + ")");
  }
}

void require_steps(int steps) {
  if (steps < 16) throw Error(ErrorCode::InvalidParameter, "ODE needs at least 16 steps");
}

// RK4 for y' = rhs(t, y) on [0, steps h], storing every node.
template <class Rhs>
std::vector<double> rk4(Rhs rhs, double y0, double h, int steps) {
  std::vector<double> y(steps + 1);
  y[0] = y0;
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    const double k1 = rhs(t, y[k]);
    const double k2 = rhs(t + 0.5 * h, y[k] + 0.5 * h * k1);
    const double k3 = rhs(t + 0.5 * h, y[k] + 0.5 * h * k2);
    const double k4 = rhs(t + h, y[k] + h * k3);
    y[k + 1] = y[k] + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

std::vector<double> grid(double period, int steps) {
  std::vector<double> t(steps + 1);
  for (int k = 0; k <= steps; ++k) t[k] = period * k / steps;
  return t;
}

}  // namespace

PeriodicFunction::PeriodicFunction(std::function<double(double)> f, double period)
    : f_(std::move(f)), period_(period) {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw Error(ErrorCode::InvalidParameter, "period must be positive");
  }
}

PeriodicFunction PeriodicFunction::from_samples(std::vector<double> samples, double period) {
  const int n = static_cast<int>(samples.size());
  if (n == 0) throw Error(ErrorCode::InvalidParameter, "no samples");
  const double w = 2.0 * std::numbers::pi / period;
  const int half = n / 2;
  std::vector<double> a(half + 1, 0.0);
  std::vector<double> b(half + 1, 0.0);
  for (int k = 0; k <= half; ++k) {
    for (int j = 0; j < n; ++j) {
      const double phase = 2.0 * std::numbers::pi * k * j / n;
      a[k] += samples[j] * std::cos(phase);
      b[k] += samples[j] * std::sin(phase);
    }
    a[k] *= 2.0 / n;
    b[k] *= 2.0 / n;
  }
  const bool even = n % 2 == 0;
  auto eval = [a, b, half, even, w](double t) {
    double s = 0.5 * a[0];
    for (int k = 1; k <= half; ++k) {
      const double c = std::cos(k * w * t);
      const double sn = std::sin(k * w * t);
      if (even && k == half) {
        s += 0.5 * a[k] * c;
      } else {
        s += a[k] * c + b[k] * sn;
      }
    }
    return s;
  };
  return PeriodicFunction(eval, period);
}

double PeriodicFunction::mean(int n) const {
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += f_(period_ * k / n);
  return s / n;
}

double PeriodicFunction::min_value(int n) const {
  double lo = f_(0.0);
  for (int k = 1; k < n; ++k) lo = std::min(lo, f_(period_ * k / n));
  return lo;
}

double PeriodicFunction::periodicity_defect(int n) const {
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    const double t = period_ * k / n;
    worst = std::max(worst, std::abs(f_(t + period_) - f_(t)));
  }
  return worst;
}

PeriodicSolution solve_flat_case(const PeriodicFunction& f, int steps) {
  require_steps(steps);
  require_conformal_factor(f);
  PeriodicSolution s;
  s.period = f.period();
  s.c = f.mean(steps);
  const double h = s.period / steps;
  s.t = grid(s.period, steps);
  const double c = s.c;
  s.values = rk4([&](double t, double) { return f(t) - c; }, 0.0, h, steps);
  s.periodicity_residual = std::abs(s.values[steps] - s.values[0]);

  // Zero mean over one period (periodic trapezoid).
  double mean = 0.0;
  for (int k = 0; k < steps; ++k) mean += s.values[k];
  mean /= steps;
  for (double& v : s.values) v -= mean;

  const std::vector<double> period_values(s.values.begin(), s.values.end() - 1);
  const std::vector<double> d = periodic_derivative(period_values, h);
  for (int k = 0; k < steps; ++k) {
    s.ode_residual = std::max(s.ode_residual, std::abs(-d[k] - (c - f(s.t[k]))));
  }
  return s;
}

PeriodicSolution symmetrize_flat_solution(const PeriodicSolution& s, const PeriodicFunction& f) {
  const int steps = static_cast<int>(s.values.size()) - 1;
  if (steps < 16) throw Error(ErrorCode::InvalidParameter, "solution grid too small");
  PeriodicSolution out = s;
  for (int k = 0; k <= steps; ++k) {
    const int mirror = (steps - k) % steps;
    out.values[k] = 0.5 * (s.values[k % steps] - s.values[mirror]);
  }
  out.periodicity_residual = std::abs(out.values[steps] - out.values[0]);
  const double h = s.period / steps;
  const std::vector<double> period_values(out.values.begin(), out.values.end() - 1);
  const std::vector<double> d = periodic_derivative(period_values, h);
  out.ode_residual = 0.0;
  for (int k = 0; k < steps; ++k) {
    out.ode_residual = std::max(out.ode_residual, std::abs(-d[k] - (s.c - f(s.t[k]))));
  }
  return out;
}

PeriodicSolution integrate_hyperbolic(const PeriodicFunction& f, double c, double beta0, int steps) {
  require_steps(steps);
  PeriodicSolution s;
  s.period = f.period();
  s.c = c;
  const double h = s.period / steps;
  s.t = grid(s.period, steps);
  s.values = rk4([&](double t, double b) { return b + c - f(t); }, beta0, h, steps);
  s.periodicity_residual = std::abs(s.values[steps] - s.values[0]);
  std::vector<double> period_values(s.values.begin(), s.values.end() - 1);
  const std::vector<double> d = periodic_derivative(period_values, h);
  // The stencil assumes periodicity; only meaningful once the drift is removed.
  for (int k = 0; k < steps; ++k) {
    s.ode_residual =
        std::max(s.ode_residual, std::abs(d[k] - s.values[k] - (c - f(s.t[k]))));
  }
  return s;
}

PeriodicSolution solve_hyperbolic_case(const PeriodicFunction& f, double c, int steps) {
  require_conformal_factor(f);
  if (!std::isfinite(c)) throw Error(ErrorCode::InvalidParameter, "c must be finite");
  const double a0 = f.period();
  const PeriodicSolution trial = integrate_hyperbolic(f, c, 0.0, steps);
  // beta(y + a0) - beta(y) = p e^y, removed by subtracting p / (e^a0 - 1) e^y.
  // The integrator's one-period growth factor stands in for e^a0 so that the
  // discrete orbit closes exactly.
  const double p = trial.values.back() - trial.values.front();
  const double growth =
      rk4([](double, double b) { return b; }, 1.0, a0 / steps, steps).back();
  const double beta0 = -p / (growth - 1.0);
  PeriodicSolution s = integrate_hyperbolic(f, c, beta0, steps);

  // Continue through a second period and compare with the first.
  const double h = a0 / steps;
  const std::vector<double> next =
      rk4([&](double t, double b) { return b + c - f(t + a0); }, s.values.back(), h, steps);
  s.periodicity_residual = 0.0;
  for (int k = 0; k <= steps; ++k) {
    s.periodicity_residual = std::max(s.periodicity_residual, std::abs(next[k] - s.values[k]));
  }
  return s;
}

HorizontalLiftPath lift_polygon(const std::vector<Point2>& vertices, Point3 start,
                                int steps_per_segment) {
  if (steps_per_segment < 1) throw Error(ErrorCode::InvalidParameter, "steps per segment < 1");
  if (vertices.empty()) throw Error(ErrorCode::InvalidParameter, "polygon has no vertices");
  if (vertices.front()[0] != start[0] || vertices.front()[1] != start[1]) {
    throw Error(ErrorCode::InvalidParameter, "start point does not lie over the first vertex");
  }
  HorizontalLiftPath path;
  Point3 p = start;
  path.base.push_back({p[0], p[1]});
  path.lifted.push_back(p);
  for (std::size_t s = 0; s + 1 < vertices.size(); ++s) {
    const Point2 a = vertices[s];
    const Point2 b = vertices[s + 1];
    const double vx = b[0] - a[0];
    const double vy = b[1] - a[1];
    // Along the segment x' = vx, y' = vy, t' = x vy - y vx; p is already at a
    // in the base.
    const double h = 1.0 / steps_per_segment;
    auto rhs = [&](double u) {
      const double x = a[0] + u * vx;
      const double y = a[1] + u * vy;
      return x * vy - y * vx;
    };
    for (int k = 0; k < steps_per_segment; ++k) {
      const double u = k * h;
      const double k1 = rhs(u);
      const double k2 = rhs(u + 0.5 * h);
      const double k4 = rhs(u + h);
      const double dt = h / 6.0 * (k1 + 4.0 * k2 + k4);
      const Point3 q{a[0] + (u + h) * vx, a[1] + (u + h) * vy, p[2] + dt};
      const double dx = q[0] - p[0];
      const double dy = q[1] - p[1];
      const double xm = 0.5 * (p[0] + q[0]);
      const double ym = 0.5 * (p[1] + q[1]);
      const double len = std::sqrt(dx * dx + dy * dy + dt * dt);
      if (len > 0.0) {
        path.horizontality_residual =
            std::max(path.horizontality_residual, std::abs(dt + ym * dx - xm * dy) / len);
      }
      p = q;
      path.base.push_back({p[0], p[1]});
      path.lifted.push_back(p);
    }
  }
  return path;
}

double nil_commutator_shift(Point2 V, Point2 W) {
  const std::vector<Point2> loop{{0.0, 0.0},
                                 {V[0], V[1]},
                                 {V[0] + W[0], V[1] + W[1]},
                                 {W[0], W[1]},
                                 {0.0, 0.0}};
  const HorizontalLiftPath path = lift_polygon(loop, {0.0, 0.0, 0.0});
  // The lift ends over the origin; the Reeb segment back to t = 0 has this
  // length with orientation -xi, so the commutator shifts by +end.
  return path.lifted.back()[2];
}

double nil_automorphism_commutator(Point2 V, Point2 W) {
  auto tau = [](Point2 v, Point3 p, double sign) {
    const double v1 = sign * v[0];
    const double v2 = sign * v[1];
    return Point3{p[0] + v1, p[1] + v2, p[2] + v1 * p[1] - v2 * p[0]};
  };
  Point3 p{0.0, 0.0, 0.0};
  p = tau(W, p, 1.0);
  p = tau(V, p, 1.0);
  p = tau(W, p, -1.0);
  p = tau(V, p, -1.0);
  return p[2];
}

}  // namespace gcelab
