#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace cavbell {

/// Uniform time grid with n samples covering [t0, t1].
struct TimeGrid {
  double t0 = 0.0;
  double t1 = 1.0;
  std::size_t n = 2;

  TimeGrid() = default;
  TimeGrid(double start, double stop, std::size_t samples)
      : t0(start), t1(stop), n(samples) {
    if (!(t1 > t0)) throw std::invalid_argument("TimeGrid: t1 must exceed t0");
    if (n < 2) throw std::invalid_argument("TimeGrid: need at least 2 samples");
  }

  double dt() const { return (t1 - t0) / static_cast<double>(n - 1); }
  double time(std::size_t i) const { return t0 + dt() * static_cast<double>(i); }

  std::vector<double> times() const {
    std::vector<double> ts(n);
    for (std::size_t i = 0; i < n; ++i) ts[i] = time(i);
    return ts;
  }

  bool contains(double t) const {
    const double eps = 1e-12 * (t1 - t0);
    return t >= t0 - eps && t <= t1 + eps;
  }

  bool same_as(const TimeGrid& other, double tol = 1e-12) const {
    return n == other.n && std::abs(t0 - other.t0) <= tol &&
           std::abs(t1 - other.t1) <= tol;
  }

  /// Grid with the same endpoints and half the step (shares every other node).
  TimeGrid refined() const { return TimeGrid(t0, t1, 2 * n - 1); }
};

/// Trapezoidal weights: dt/2 at the ends, dt inside.
inline std::vector<double> trapezoid_weights(const TimeGrid& g) {
  std::vector<double> w(g.n, g.dt());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

}  // namespace cavbell
