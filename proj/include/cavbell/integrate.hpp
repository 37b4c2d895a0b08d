#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "cavbell/time_grid.hpp"

namespace cavbell {

/// Classical fixed-step RK4 over a uniform grid. `deriv(t, y)` returns dy/dt;
/// State needs scalar multiplication and addition (Eigen types qualify).
/// Returns the state at every grid node, including the initial one.
template <typename State, typename Deriv>
std::vector<State> rk4_integrate(const Deriv& deriv, const State& y0,
                                 const TimeGrid& grid) {
  std::vector<State> out;
  out.reserve(grid.n);
  out.push_back(y0);
  const double h = grid.dt();
  State y = y0;
  for (std::size_t i = 0; i + 1 < grid.n; ++i) {
    const double t = grid.time(i);
    const State k1 = deriv(t, y);
    const State k2 = deriv(t + 0.5 * h, State(y + (0.5 * h) * k1));
    const State k3 = deriv(t + 0.5 * h, State(y + (0.5 * h) * k2));
    const State k4 = deriv(t + h, State(y + h * k3));
    y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.push_back(y);
  }
  return out;
}

}  // namespace cavbell
