#pragma once
#include <cstddef>
#include <optional>
#include <vector>

#include "tgp/hilbert_fock.hpp"

namespace tgp {

struct EigenSnapshot {
  Eigen::VectorXd values;  // descending
  Mat vectors;             // column k pairs with values(k)
  std::vector<int> block;  // connected block of each eigenpair
};

EigenSnapshot eig_hermitian(const Mat& rho);

struct EigenBranch {
  int label = 0;
  std::vector<double> values;
  std::vector<Vec> vectors;
  double min_gap = 0.0;
};

struct TrackingConfig {
  double overlap_threshold = 0.9;
  double initial_match = 0.999;
  // eigenvalues closer than rel*max|eps| + abs form one cluster
  double degeneracy_rel = 1e-10;
  // inside one block, also closer than noise_rel*max|eps_block|
  // (the integrator floor)
  double noise_rel = 1e-8;
  double degeneracy_abs = 1e-13;
};

struct TrackingResult {
  std::vector<EigenBranch> branches;
  std::optional<std::size_t> distinguished;
  // smallest consecutive overlap seen on any branch
  double min_overlap = 1.0;
};

TrackingResult track_branches(const std::vector<EigenSnapshot>& snaps,
                              const std::optional<Vec>& psi0,
                              const TrackingConfig& cfg = {});

// phase of every vector after the first chosen so <psi_i|psi_i+1> > 0
void fix_gauge(EigenBranch& b);

}  // namespace tgp
