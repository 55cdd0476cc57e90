#include "tgp/geometric_phase.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "tgp/errors.hpp"

namespace tgp {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap(double x) { return std::remainder(x, 2.0 * kPi); }

// per-sample increments of the gauge invariant sum on a sub-grid
std::vector<double> increments4(const std::vector<Vec>& V,
                                const std::vector<std::size_t>& idx,
                                bool corrected, double min_overlap) {
  const std::size_t n = idx.size();
  std::vector<double> inc(n, 0.0);
  if (n < 2) return inc;
  const Vec& v0 = V[idx[0]];
  for (std::size_t s = 0; s + 1 < n; ++s) {
    const Vec& a = V[idx[s]];
    const Vec& b = V[idx[s + 1]];
    const cplx ab = a.dot(b);
    if (std::abs(ab) < min_overlap) {
      std::ostringstream os;
      os << "consecutive branch samples nearly orthogonal at sample " << idx[s + 1]
         << " (|overlap| " << std::abs(ab) << ")";
      throw ResolutionError(os.str(), idx[s + 1]);
    }
    inc[s + 1] = std::arg(v0.dot(b) * std::conj(ab) * a.dot(v0));
  }
  if (!corrected || n < 3) return inc;
  // triangle centred on sample i: arg <i-1|i+1><i+1|i><i|i-1>
  std::vector<double> T(n - 2);
  for (std::size_t i = 1; i + 1 < n; ++i)
    T[i - 1] = bargmann(V[idx[i - 1]], V[idx[i]], V[idx[i + 1]]);
  for (std::size_t s = 0; s + 1 < n; ++s) {
    double sum = 0;
    int cnt = 0;
    if (s >= 1) sum += T[s - 1], ++cnt;
    if (s < T.size()) sum += T[s], ++cnt;
    if (cnt) inc[s + 1] += sum / cnt / 6.0;
  }
  return inc;
}

std::vector<double> cumsum(const std::vector<double>& x) {
  std::vector<double> out(x.size());
  double acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (acc += x[i]);
  return out;
}

}  // namespace

std::string to_string(Quadrature q) {
  switch (q) {
    case Quadrature::pancharatnam: return "pancharatnam";
    case Quadrature::corrected4: return "corrected4";
    default: return "richardson6";
  }
}

Quadrature quadrature_from_string(const std::string& s) {
  if (s == "pancharatnam") return Quadrature::pancharatnam;
  if (s == "corrected4") return Quadrature::corrected4;
  if (s == "richardson6") return Quadrature::richardson6;
  throw InvalidArgument("unknown quadrature '" + s + "'");
}

std::string to_string(Monotonicity m) {
  return m == Monotonicity::monotone ? "monotone" : "non_monotone";
}

double bargmann(const Vec& a, const Vec& b, const Vec& c) {
  return std::arg(a.dot(c) * c.dot(b) * b.dot(a));
}

std::vector<double> gp_accumulate(const std::vector<Vec>& V, Quadrature q,
                                  double min_overlap) {
  const std::size_t N = V.size();
  std::vector<std::size_t> all(N);
  for (std::size_t i = 0; i < N; ++i) all[i] = i;
  if (q == Quadrature::pancharatnam)
    return cumsum(increments4(V, all, false, min_overlap));
  std::vector<double> F = cumsum(increments4(V, all, true, min_overlap));
  if (q == Quadrature::corrected4 || N < 5) return F;

  // one Richardson step against every other sample
  std::vector<std::size_t> ce;
  for (std::size_t i = 0; i < N; i += 2) ce.push_back(i);
  const std::vector<double> c = increments4(V, ce, true, 0.0);
  std::vector<double> C(ce.size(), 0.0);
  for (std::size_t j = 1; j < ce.size(); ++j) {
    const double pair = F[ce[j]] - F[ce[j - 1]];
    C[j] = C[j - 1] + pair + wrap(c[j] - pair);
  }
  std::vector<double> corr(ce.size());
  for (std::size_t j = 0; j < ce.size(); ++j) corr[j] = (F[ce[j]] - C[j]) / 15.0;
  std::vector<double> out = F;
  for (std::size_t j = 0; j < ce.size(); ++j) out[ce[j]] += corr[j];
  for (std::size_t i = 1; i < N; i += 2) {
    const std::size_t l = (i - 1) / 2;
    out[i] += (i + 1 < N) ? 0.5 * (corr[l] + corr[l + 1]) : corr[l];
  }
  return out;
}

GeometricPhaseSeries gp_pure_branch(const EigenBranch& branch,
                                    const std::vector<double>& times,
                                    const GpConfig& cfg) {
  if (branch.vectors.size() != times.size())
    throw InvalidArgument("gp_pure_branch: times and branch differ in length");
  if (branch.vectors.empty()) throw InvalidArgument("gp_pure_branch: empty branch");
  if (std::abs(branch.values.front() - 1.0) > 1e-6)
    throw InvalidArgument("gp_pure_branch: branch does not start pure");
  for (const auto& v : branch.vectors)
    if (std::abs(v.norm() - 1.0) > 1e-9)
      throw InvalidArgument("gp_pure_branch: branch vectors not normalized");

  GeometricPhaseSeries s;
  s.times = times;
  s.phi_g = gp_accumulate(branch.vectors, cfg.quadrature, cfg.min_overlap);
  s.phi_g[0] = 0.0;
  for (std::size_t j = 2; j < s.phi_g.size(); ++j) {
    const double a = s.phi_g[j - 1] - s.phi_g[j - 2];
    const double b = s.phi_g[j] - s.phi_g[j - 1];
    if ((a > 0 && b < 0) || (a < 0 && b > 0)) {
      const double ta = 0.5 * (times[j - 2] + times[j - 1]);
      const double tb = 0.5 * (times[j - 1] + times[j]);
      s.sign_change_times.push_back(ta + (tb - ta) * a / (a - b));
    }
  }
  detect_settle(s, cfg.settle_tol, cfg.settle_hold);
  return s;
}

void detect_settle(GeometricPhaseSeries& s, double tol, double hold) {
  s.settled = false;
  s.settle_time = 0.0;
  if (s.phi_g.empty()) return;
  const double end = s.phi_g.back();
  std::size_t k = s.phi_g.size() - 1;
  while (k > 0 && std::abs(s.phi_g[k - 1] - end) < tol) --k;
  s.settle_time = s.times[k];
  s.settled = s.times.back() - s.times[k] >= hold && k + 1 < s.phi_g.size();
}

TongPhaseResult gp_tong_mixed(const std::vector<EigenBranch>& branches,
                              std::size_t T_index, Quadrature q) {
  TongPhaseResult r;
  cplx sum = 0;
  for (const auto& b : branches) {
    if (T_index >= b.vectors.size())
      throw InvalidArgument("gp_tong_mixed: horizon beyond tracked samples");
    const double w0 = b.values.front();
    const double wT = b.values[T_index];
    if (!(w0 > 0) || !(wT > 0)) {
      r.contributions.push_back(0.0);
      continue;
    }
    const std::vector<Vec> head(b.vectors.begin(),
                                b.vectors.begin() + static_cast<long>(T_index) + 1);
    const cplx ov = b.vectors.front().dot(b.vectors[T_index]);
    // phase of the branch minus its endpoint overlap: the dynamical factor
    const double phi = head.size() > 1 ? gp_accumulate(head, q).back() : 0.0;
    const double gamma = phi - std::arg(ov);
    const cplx c = std::sqrt(w0 * wT) * ov * std::polar(1.0, gamma);
    r.contributions.push_back(c);
    sum += c;
  }
  r.phi_g = std::arg(sum);
  return r;
}

Classification classify_monotonicity(const GeometricPhaseSeries& s,
                                     const MonotonicityConfig& cfg) {
  Classification out;
  const auto& p = s.phi_g;
  const std::size_t N = p.size();
  if (N < 3) return out;
  const double thr = cfg.reversal_threshold;

  // zig-zag: a reversal is a retrace of more than thr from the running extremum
  std::vector<std::size_t> ext;
  int dir = 0;
  double hi = p[0], lo = p[0];
  std::size_t ihi = 0, ilo = 0;
  for (std::size_t j = 1; j < N; ++j) {
    if (dir == 0) {
      if (p[j] > hi) hi = p[j], ihi = j;
      if (p[j] < lo) lo = p[j], ilo = j;
      // the first significant move sets the direction, it is not a reversal
      if (hi - lo > thr) dir = ihi > ilo ? 1 : -1;
    } else if (dir > 0) {
      if (p[j] >= hi) hi = p[j], ihi = j;
      else if (hi - p[j] > thr) {
        ext.push_back(ihi);
        dir = -1;
        lo = p[j], ilo = j;
      }
    } else {
      if (p[j] <= lo) lo = p[j], ilo = j;
      else if (p[j] - lo > thr) {
        ext.push_back(ilo);
        dir = 1;
        hi = p[j], ihi = j;
      }
    }
  }

  // reversal pairs closer than the noise window are spikes
  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < ext.size();) {
    if (k + 1 < ext.size() && ext[k + 1] - ext[k] <= cfg.noise_window) {
      k += 2;
      continue;
    }
    kept.push_back(ext[k]);
    ++k;
  }

  for (std::size_t e : kept) {
    double t = s.times[e];
    if (e >= 1 && e + 1 < N) {
      const double a = p[e] - p[e - 1];
      const double b = p[e + 1] - p[e];
      if (a != b && ((a >= 0) != (b >= 0))) {
        const double ta = 0.5 * (s.times[e - 1] + s.times[e]);
        const double tb = 0.5 * (s.times[e] + s.times[e + 1]);
        t = ta + (tb - ta) * a / (a - b);
      }
    }
    out.event_samples.push_back(e);
    out.event_times.push_back(t);
  }
  out.kind = out.event_times.empty() ? Monotonicity::monotone
                                     : Monotonicity::non_monotone;
  return out;
}

}  // namespace tgp
