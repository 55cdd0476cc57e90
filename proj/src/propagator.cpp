#include "tgp/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tgp/errors.hpp"

namespace tgp {

void TimeGrid::validate() const {
  if (n_samples < 2) throw InvalidArgument("time grid needs >= 2 samples");
  if (!(t_start >= 0.0)) throw InvalidArgument("t_start must be >= 0");
  if (!(t_end > t_start)) throw InvalidArgument("t_end must exceed t_start");
}

double TimeGrid::at(std::size_t i) const {
  // i/(n-1) first so that a doubled grid hits the same doubles
  const double f = static_cast<double>(i) / static_cast<double>(n_samples - 1);
  return t_start + (t_end - t_start) * f;
}

std::vector<double> TimeGrid::samples() const {
  std::vector<double> t(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) t[i] = at(i);
  return t;
}

StateCheck check_state(const Mat& rho, const TruncatedBasis& basis) {
  StateCheck c;
  c.trace_err = std::abs(rho.trace() - cplx(1.0, 0.0));
  c.herm_err = (rho - rho.adjoint()).norm();
  const auto shells = basis.shell_of_index();
  double off = 0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i)
    for (Eigen::Index j = 0; j < rho.cols(); ++j)
      if (shells[static_cast<std::size_t>(i)] !=
          shells[static_cast<std::size_t>(j)])
        off += std::norm(rho(i, j));
  c.offblock = std::sqrt(off);
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (rho + rho.adjoint()),
                                        Eigen::EigenvaluesOnly);
  c.min_eig = es.eigenvalues().minCoeff();
  return c;
}

namespace {

// Dormand-Prince 5(4)
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                 a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0,
                 d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0,
                 d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0,
                 d7 = 69997945.0 / 29380423.0;

struct BlockIndex {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> ranges;
  explicit BlockIndex(const TruncatedBasis& b) {
    for (int k = 0; k <= b.cutoff; ++k) {
      auto [lo, hi] = b.shell(k);
      ranges.emplace_back(static_cast<Eigen::Index>(lo),
                          static_cast<Eigen::Index>(hi - lo));
    }
  }
  // max over block pairs of |err| / (atol + rtol |y|)
  double norm(const Mat& err, const Mat& y0, const Mat& y1, double atol,
              double rtol) const {
    double worst = 0;
    for (auto [ri, ni] : ranges)
      for (auto [cj, nj] : ranges) {
        const double e = err.block(ri, cj, ni, nj).norm();
        if (e == 0.0) continue;
        const double s =
            std::max(y0.block(ri, cj, ni, nj).norm(),
                     y1.block(ri, cj, ni, nj).norm());
        worst = std::max(worst, e / (atol + rtol * s));
      }
    return worst;
  }
};

void hermitize(Mat& m) {
  m = 0.5 * (m + m.adjoint()).eval();
}

}  // namespace

Trajectory evolve(const Mat& rho0, const LindbladModel& model,
                  const TimeGrid& grid, const AccuracyConfig& tol) {
  grid.validate();
  const auto& basis = model.basis();
  const Eigen::Index d = model.H().rows();
  if (rho0.rows() != d || rho0.cols() != d)
    throw InvalidArgument("rho0 dimension does not match the model");
  {
    const StateCheck c = check_state(rho0, basis);
    if (c.herm_err > 1e-10 || c.trace_err > 1e-10 || c.min_eig < -1e-10)
      throw InvalidArgument("rho0 must be Hermitian, unit trace and PSD");
  }
  if (!(tol.rtol > 0) || !(tol.atol > 0))
    throw InvalidArgument("tolerances must be positive");

  Trajectory tr;
  tr.grid = grid;
  tr.times = grid.samples();
  tr.states.reserve(grid.n_samples);
  tr.baths = model.baths();
  tr.dephasing = model.dephasing();
  tr.basis = basis;

  const BlockIndex blocks(basis);
  const double T = grid.t_end;
  const double hmax = tol.max_step > 0 ? tol.max_step : T - grid.t_start;

  Mat y = rho0;
  hermitize(y);
  Mat k1(d, d), k2(d, d), k3(d, d), k4(d, d), k5(d, d), k6(d, d), k7(d, d);
  Mat ytmp(d, d), y1(d, d), err(d, d);
  model.rhs(y, k1);

  double t = grid.t_start;
  double h = std::min(hmax, 0.01 * (T - t));
  std::size_t next = 0;

  auto record = [&](Mat s) {
    hermitize(s);
    if (tol.validate_states) {
      const StateCheck c = check_state(s, basis);
      auto& w = tr.worst;
      w.trace_err = std::max(w.trace_err, c.trace_err);
      w.herm_err = std::max(w.herm_err, c.herm_err);
      w.offblock = std::max(w.offblock, c.offblock);
      w.min_eig = tr.states.empty() ? c.min_eig : std::min(w.min_eig, c.min_eig);
      if (c.trace_err > tol.trace_tol || c.herm_err > tol.herm_tol ||
          c.min_eig < -tol.neg_eig_tol) {
        std::ostringstream os;
        os << "state invalid at t=" << tr.times[next]
           << " (trace err " << c.trace_err << ", min eig " << c.min_eig
           << ")";
        throw StateValidityError(os.str(), tr.times[next]);
      }
    }
    tr.states.push_back(std::move(s));
    ++next;
  };

  // samples at or before the start
  while (next < grid.n_samples && tr.times[next] <= t) record(y);

  std::size_t steps = 0;
  double err_prev = 1e-4;
  while (next < grid.n_samples) {
    if (++steps > tol.max_steps) {
      std::ostringstream os;
      os << "step budget exhausted at t=" << t;
      throw IntegrationFailure(os.str(), t);
    }
    h = std::min(h, hmax);
    const bool last = t + h >= T;
    if (last) h = T - t;
    if (h <= 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
      std::ostringstream os;
      os << "step size underflow at t=" << t;
      throw IntegrationFailure(os.str(), t);
    }

    ytmp = y + h * a21 * k1;
    model.rhs(ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    model.rhs(ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    model.rhs(ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    model.rhs(ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    model.rhs(ytmp, k6);
    y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    model.rhs(y1, k7);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double en = blocks.norm(err, y, y1, tol.atol, tol.rtol);
    if (!std::isfinite(en)) en = 1e10;

    if (en <= 1.0) {
      const double tn = last ? T : t + h;
      hermitize(y1);
      // dense output on [t, tn]
      const Mat ydiff = y1 - y;
      const Mat bspl = h * k1 - ydiff;
      const Mat r4 = ydiff - h * k7 - bspl;
      const Mat r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 +
                          d7 * k7);
      while (next < grid.n_samples && tr.times[next] <= tn) {
        const double ts = tr.times[next];
        if (ts == tn) {
          record(y1);
          continue;
        }
        const double th = (ts - t) / h;
        const double th1 = 1.0 - th;
        record(y + th * (ydiff + th1 * (bspl + th * (r4 + th1 * r5))));
      }
      y = y1;
      k1 = k7;
      t = tn;
      ++tr.steps_accepted;
      // PI controller
      const double fac = 0.9 * std::pow(en, -0.7 / 5) * std::pow(err_prev, 0.4 / 5);
      h *= std::clamp(std::isfinite(fac) ? fac : 5.0, 0.2, 5.0);
      err_prev = std::max(en, 1e-4);
    } else {
      ++tr.steps_rejected;
      h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
    }
  }
  return tr;
}

Trajectory evolve(const Mat& rho0, const SystemParams& sys,
                  const BathParams& baths, DephasingOp op,
                  const TruncatedBasis& basis, const TimeGrid& grid,
                  const AccuracyConfig& tol) {
  LindbladModel model(sys, baths, op, basis);
  Trajectory tr = evolve(rho0, model, grid, tol);
  tr.sys = sys;
  return tr;
}

bool steady_reached(const Trajectory& traj, double window, double eps) {
  if (traj.size() < 2) throw InvalidArgument("trajectory too short");
  const double span = traj.times.back() - traj.times.front();
  if (!(window < span)) throw InvalidArgument("window must be shorter than the span");
  const double t_lo = traj.times.back() - window;
  const Mat& last = traj.states.back();
  double worst = 0;
  for (std::size_t i = traj.size(); i-- > 0;) {
    if (traj.times[i] < t_lo) break;
    worst = std::max(worst, (traj.states[i] - last).norm());
  }
  return worst < eps;
}

}  // namespace tgp
