#pragma once
#include <cstddef>
#include <vector>

#include "tgp/dynamics_model.hpp"

namespace tgp {

struct TimeGrid {
  double t_start = 0.0;
  double t_end = 0.0;
  std::size_t n_samples = 0;

  void validate() const;
  double at(std::size_t i) const;
  std::vector<double> samples() const;
};

struct AccuracyConfig {
  double rtol = 1e-9;
  double atol = 1e-12;
  double max_step = 0.0;  // 0: unbounded
  std::size_t max_steps = 20'000'000;
  bool validate_states = true;
  // thresholds for the per-sample state checks
  double trace_tol = 1e-8;
  double herm_tol = 1e-9;
  double neg_eig_tol = 1e-8;
};

struct StateCheck {
  double trace_err = 0;
  double herm_err = 0;
  double min_eig = 0;
  double offblock = 0;  // Frobenius norm outside the excitation blocks
};

StateCheck check_state(const Mat& rho, const TruncatedBasis& basis);

struct Trajectory {
  std::vector<double> times;
  std::vector<Mat> states;
  TimeGrid grid;
  SystemParams sys;
  BathParams baths;
  DephasingOp dephasing = DephasingOp::number;
  TruncatedBasis basis;

  std::size_t steps_accepted = 0;
  std::size_t steps_rejected = 0;
  // worst values over all samples
  StateCheck worst;

  std::size_t size() const { return states.size(); }
};

Trajectory evolve(const Mat& rho0, const LindbladModel& model,
                  const TimeGrid& grid, const AccuracyConfig& tol);
Trajectory evolve(const Mat& rho0, const SystemParams& sys,
                  const BathParams& baths, DephasingOp op,
                  const TruncatedBasis& basis, const TimeGrid& grid,
                  const AccuracyConfig& tol);

bool steady_reached(const Trajectory& traj, double window, double eps);

}  // namespace tgp
