#include "tgp/analysis_bloch.hpp"

#include <algorithm>
#include <cmath>

#include "tgp/errors.hpp"

namespace tgp {

BlochPoint bloch_of_branch(const Vec& psi, double t) {
  if (psi.size() < 3) throw NotInBlock("state has no one-excitation block");
  for (Eigen::Index k = 0; k < psi.size(); ++k)
    if (k != 1 && k != 2 && std::abs(psi(k)) >= 1e-6)
      throw NotInBlock("state leaves span{|10>,|01>}");
  const cplx al = psi(1), be = psi(2);
  const cplx ab = std::conj(al) * be;
  return {t, 2.0 * ab.real(), 2.0 * ab.imag(), std::norm(al) - std::norm(be)};
}

MatrixElementSeries element_series(const Trajectory& traj, std::size_t i,
                                   std::size_t j) {
  if (traj.states.empty()) throw InvalidArgument("empty trajectory");
  const auto d = static_cast<std::size_t>(traj.states[0].rows());
  if (i >= d || j >= d) throw InvalidArgument("matrix index out of range");
  MatrixElementSeries s;
  s.i = i;
  s.j = j;
  s.times = traj.times;
  s.values.reserve(traj.size());
  for (const auto& r : traj.states)
    s.values.push_back(r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
  return s;
}

namespace {

std::vector<double> zero_crossings(const std::vector<double>& t,
                                   const std::vector<double>& f) {
  std::vector<double> out;
  for (std::size_t k = 1; k < f.size(); ++k) {
    const double a = f[k - 1], b = f[k];
    if (a == 0.0 && k > 1) continue;  // counted at the previous sample
    if ((a < 0 && b >= 0) || (a > 0 && b <= 0)) {
      if (b == 0.0) {
        out.push_back(t[k]);
        continue;
      }
      out.push_back(t[k - 1] + (t[k] - t[k - 1]) * a / (a - b));
    }
  }
  return out;
}

}  // namespace

std::vector<double> hemisphere_crossings(const std::vector<BlochPoint>& path,
                                         const Eigen::Vector3d& axis) {
  std::vector<double> t, f;
  t.reserve(path.size());
  f.reserve(path.size());
  for (const auto& p : path) {
    t.push_back(p.t);
    f.push_back(p.r().dot(axis));
  }
  return zero_crossings(t, f);
}

std::vector<Eigen::Vector3d> spiral_axes(const std::vector<BlochPoint>& path,
                                         std::size_t window) {
  const std::size_t N = path.size();
  if (N < 3) throw InvalidArgument("path too short for an axis fit");
  window = std::max<std::size_t>(window, 3);
  std::vector<Eigen::Vector3d> vel(N);
  for (std::size_t i = 0; i < N; ++i) {
    const std::size_t a = i == 0 ? 0 : i - 1;
    const std::size_t b = i + 1 < N ? i + 1 : N - 1;
    vel[i] = (path[b].r() - path[a].r()) / (path[b].t - path[a].t);
  }
  std::vector<Eigen::Vector3d> axes(N);
  for (std::size_t i = 0; i < N; ++i) {
    const std::size_t lo = i > window / 2 ? i - window / 2 : 0;
    const std::size_t hi = std::min(N, i + window / 2 + 1);
    Eigen::Matrix3d C = Eigen::Matrix3d::Zero();
    Eigen::Vector3d L = Eigen::Vector3d::Zero();
    for (std::size_t k = lo; k < hi; ++k) {
      C += vel[k] * vel[k].transpose();
      L += path[k].r().cross(vel[k]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(C);
    Eigen::Vector3d n = es.eigenvectors().col(0);
    if (L.dot(n) < 0) n = -n;
    axes[i] = n;
  }
  return axes;
}

std::vector<double> spiral_axis_crossings(const std::vector<BlochPoint>& path,
                                          std::size_t window) {
  const auto axes = spiral_axes(path, window);
  std::vector<double> t, f;
  for (std::size_t i = 0; i < path.size(); ++i) {
    t.push_back(path[i].t);
    f.push_back(path[i].r().dot(axes[i]));
  }
  return zero_crossings(t, f);
}

std::vector<double> antipode_crossings(const std::vector<BlochPoint>& path,
                                       std::size_t window) {
  const auto axes = spiral_axes(path, window);
  const std::size_t N = path.size();
  const Eigen::Vector3d A = -path.front().r().normalized();
  std::vector<double> t, f;
  for (std::size_t i = 0; i < N; ++i) {
    const std::size_t lo = i > window / 2 ? i - window / 2 : 0;
    const std::size_t hi = std::min(N, i + window / 2 + 1);
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
    for (std::size_t k = lo; k < hi; ++k) c += path[k].r();
    c /= static_cast<double>(hi - lo);
    t.push_back(path[i].t);
    f.push_back(axes[i].dot(A) - c.dot(axes[i]));
  }
  return zero_crossings(t, f);
}

std::optional<Extremum> interior_minimum(const std::vector<double>& times,
                                         const std::vector<double>& values) {
  const std::size_t N = values.size();
  if (N < 3 || times.size() != N) return std::nullopt;
  // skip an initial rise, e.g. a coherence that starts at zero
  std::size_t p = 0;
  while (p + 1 < N && std::abs(values[p + 1]) >= std::abs(values[p])) ++p;
  if (p + 2 >= N) return std::nullopt;
  std::size_t k = p + 1;
  for (std::size_t i = p + 1; i + 1 < N; ++i)
    if (std::abs(values[i]) < std::abs(values[k])) k = i;
  const double v = std::abs(values[k]);
  if (!(v < std::abs(values[p]) && v < std::abs(values.back())))
    return std::nullopt;
  return Extremum{k, times[k], v};
}

}  // namespace tgp
