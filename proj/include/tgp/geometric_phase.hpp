#pragma once
#include <cstddef>
#include <string>
#include <vector>

#include "tgp/spectral_tracking.hpp"

namespace tgp {

enum class Quadrature { pancharatnam, corrected4, richardson6 };

std::string to_string(Quadrature q);
Quadrature quadrature_from_string(const std::string& s);

struct GeometricPhaseSeries {
  std::vector<double> times;
  std::vector<double> phi_g;
  // zeros of the increment sequence, linearly interpolated
  std::vector<double> sign_change_times;
  bool settled = false;
  double settle_time = 0.0;
};

struct GpConfig {
  Quadrature quadrature = Quadrature::richardson6;
  double min_overlap = 0.2;
  double settle_tol = 1e-4;
  double settle_hold = 0.0;  // minimum settled span, same unit as times
};

GeometricPhaseSeries gp_pure_branch(const EigenBranch& branch,
                                    const std::vector<double>& times,
                                    const GpConfig& cfg = {});

// unwrapped phase along arbitrary normalized vectors, no purity check
std::vector<double> gp_accumulate(const std::vector<Vec>& vectors,
                                  Quadrature q, double min_overlap = 0.2);

// arg <a|c><c|b><b|a>
double bargmann(const Vec& a, const Vec& b, const Vec& c);

struct TongPhaseResult {
  double phi_g = 0.0;
  std::vector<cplx> contributions;
};

TongPhaseResult gp_tong_mixed(const std::vector<EigenBranch>& branches,
                              std::size_t T_index,
                              Quadrature q = Quadrature::richardson6);

enum class Monotonicity { monotone, non_monotone };
std::string to_string(Monotonicity m);

struct MonotonicityConfig {
  double reversal_threshold = 0.5;  // rad retraced from the running extremum
  std::size_t noise_window = 10;    // samples
  bool operator==(const MonotonicityConfig&) const = default;
};

struct Classification {
  Monotonicity kind = Monotonicity::monotone;
  std::vector<double> event_times;
  std::vector<std::size_t> event_samples;
};

Classification classify_monotonicity(const GeometricPhaseSeries& s,
                                     const MonotonicityConfig& cfg = {});

// earliest time after which |phi - phi(end)| < tol holds to the end
void detect_settle(GeometricPhaseSeries& s, double tol, double hold);

}  // namespace tgp
