#pragma once
#include <cstddef>
#include <optional>
#include <vector>

#include "tgp/propagator.hpp"

namespace tgp {

struct BlochPoint {
  double t = 0, x = 0, y = 0, z = 0;
  Eigen::Vector3d r() const { return {x, y, z}; }
};

// psi = alpha|10> + beta|01>; |10> is the north pole
BlochPoint bloch_of_branch(const Vec& psi, double t = 0.0);

struct MatrixElementSeries {
  std::size_t i = 0, j = 0;
  std::vector<double> times;
  std::vector<cplx> values;
};

MatrixElementSeries element_series(const Trajectory& traj, std::size_t i,
                                   std::size_t j);

std::vector<double> hemisphere_crossings(const std::vector<BlochPoint>& path,
                                         const Eigen::Vector3d& axis);

// sliding-window rotation axis: least-variance direction of the path
// velocity, oriented along the sense of rotation
std::vector<Eigen::Vector3d> spiral_axes(const std::vector<BlochPoint>& path,
                                         std::size_t window);

// sign changes of path(t) . axis(t) with the sliding axis
std::vector<double> spiral_axis_crossings(const std::vector<BlochPoint>& path,
                                          std::size_t window);

// times where the local winding loop starts or stops enclosing the
// antipode of the starting point: sign of n.A - <r>.n over the window
std::vector<double> antipode_crossings(const std::vector<BlochPoint>& path,
                                       std::size_t window);

struct Extremum {
  std::size_t index = 0;
  double t = 0;
  double value = 0;
};

// deepest |value| after the initial rise, strictly below the final one
std::optional<Extremum> interior_minimum(const std::vector<double>& times,
                                         const std::vector<double>& values);

}  // namespace tgp
