#include "tgp/spectral_tracking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "tgp/errors.hpp"

namespace tgp {

namespace {

// connected components of the nonzero pattern
std::vector<std::vector<Eigen::Index>> components(const Mat& m) {
  const Eigen::Index n = m.rows();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Eigen::Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (m(i, j) != cplx(0) || m(j, i) != cplx(0)) parent[find(j)] = find(i);
  std::vector<std::vector<Eigen::Index>> out;
  std::vector<Eigen::Index> slot(static_cast<std::size_t>(n), -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<Eigen::Index>(out.size());
      out.emplace_back();
    }
    out[static_cast<std::size_t>(slot[r])].push_back(i);
  }
  return out;
}

// phase making the largest component real positive
void canonical_phase(Vec& v) {
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  if (std::abs(v(k)) > 0) v *= std::conj(v(k)) / std::abs(v(k));
}

// Y (Y^H Y)^{-1/2}
Mat lowdin(const Mat& Y) {
  Eigen::SelfAdjointEigenSolver<Mat> es(Y.adjoint() * Y);
  Eigen::VectorXd s = es.eigenvalues();
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = 1.0 / std::sqrt(std::max(s(i), 1e-300));
  return Y * es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

EigenSnapshot eig_hermitian(const Mat& rho) {
  if (rho.rows() != rho.cols()) throw InvalidArgument("eig_hermitian: not square");
  const double scale = std::max(1.0, rho.norm());
  if ((rho - rho.adjoint()).norm() > 1e-9 * scale)
    throw InvalidArgument("eig_hermitian: matrix not Hermitian");
  const Eigen::Index n = rho.rows();
  const Mat h = 0.5 * (rho + rho.adjoint());

  std::vector<double> vals;
  std::vector<Vec> vecs;
  std::vector<int> blk;
  vals.reserve(static_cast<std::size_t>(n));
  vecs.reserve(static_cast<std::size_t>(n));
  int cid = 0;
  for (const auto& comp : components(h)) {
    const int id = cid++;
    blk.insert(blk.end(), comp.size(), id);
    const auto m = static_cast<Eigen::Index>(comp.size());
    Mat sub(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j) sub(i, j) = h(comp[i], comp[j]);
    if (m == 1) {
      vals.push_back(sub(0, 0).real());
      Vec v = Vec::Zero(n);
      v(comp[0]) = 1.0;
      vecs.push_back(v);
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(sub);
    for (Eigen::Index k = 0; k < m; ++k) {
      vals.push_back(es.eigenvalues()(k));
      Vec v = Vec::Zero(n);
      for (Eigen::Index i = 0; i < m; ++i) v(comp[i]) = es.eigenvectors()(i, k);
      canonical_phase(v);
      vecs.push_back(v);
    }
  }
  std::vector<std::size_t> order(vals.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
  EigenSnapshot s;
  s.values.resize(n);
  s.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    s.block.push_back(blk[order[static_cast<std::size_t>(k)]]);
    s.values(k) = vals[order[static_cast<std::size_t>(k)]];
    s.vectors.col(k) = vecs[order[static_cast<std::size_t>(k)]];
  }
  return s;
}

void fix_gauge(EigenBranch& b) {
  for (std::size_t i = 1; i < b.vectors.size(); ++i) {
    const cplx ov = b.vectors[i - 1].dot(b.vectors[i]);
    if (std::abs(ov) > 0) b.vectors[i] *= std::conj(ov) / std::abs(ov);
  }
}

TrackingResult track_branches(const std::vector<EigenSnapshot>& snaps,
                              const std::optional<Vec>& psi0,
                              const TrackingConfig& cfg) {
  if (snaps.empty()) throw InvalidArgument("track_branches: no snapshots");
  const Eigen::Index n = snaps[0].values.size();
  const auto nb = static_cast<std::size_t>(n);
  TrackingResult res;
  res.branches.resize(nb);

  auto gaps = [&](const Eigen::VectorXd& v, Eigen::Index k) {
    double g = INFINITY;
    for (Eigen::Index j = 0; j < v.size(); ++j)
      if (j != k) g = std::min(g, std::abs(v(j) - v(k)));
    return g;
  };

  // initial assignment: sorted order, distinguished branch matched to psi0
  const auto& s0 = snaps[0];
  if (psi0) {
    if (psi0->size() != n) throw InvalidArgument("psi0 dimension mismatch");
    const Vec p = psi0->normalized();
    std::optional<std::size_t> hit;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (std::abs(s0.vectors.col(k).dot(p)) > cfg.initial_match) {
        if (hit) throw InvalidInitialState("initial state matches several eigenvectors");
        hit = static_cast<std::size_t>(k);
      }
    }
    if (!hit) throw InvalidInitialState("no eigenvector of rho(0) matches the initial state");
    res.distinguished = *hit;
  }
  for (std::size_t k = 0; k < nb; ++k) {
    auto& br = res.branches[k];
    br.label = static_cast<int>(k);
    br.values.reserve(snaps.size());
    br.vectors.reserve(snaps.size());
    Vec v = s0.vectors.col(static_cast<Eigen::Index>(k));
    if (res.distinguished && *res.distinguished == k) {
      const cplx ov = v.dot(*psi0);
      if (std::abs(ov) > 0) v *= ov / std::abs(ov);
    }
    br.values.push_back(s0.values(static_cast<Eigen::Index>(k)));
    br.vectors.push_back(v);
    br.min_gap = gaps(s0.values, static_cast<Eigen::Index>(k));
  }

  Mat P(n, n);
  for (std::size_t i = 1; i < snaps.size(); ++i) {
    const auto& s = snaps[i];
    if (s.values.size() != n) throw InvalidArgument("snapshot dimension changed");
    for (std::size_t k = 0; k < nb; ++k)
      P.col(static_cast<Eigen::Index>(k)) = res.branches[k].vectors.back();

    // degenerate clusters: neighbours in the whole spectrum, or neighbours
    // inside one block at the noise floor
    std::vector<std::vector<Eigen::Index>> clusters;
    {
      std::vector<int> ids(s.block);
      if (ids.size() != nb) ids.assign(nb, 0);
      std::vector<Eigen::Index> root(nb);
      for (std::size_t k = 0; k < nb; ++k) root[k] = static_cast<Eigen::Index>(k);
      auto find = [&](Eigen::Index x) {
        while (root[static_cast<std::size_t>(x)] != x) x = root[static_cast<std::size_t>(x)];
        return x;
      };
      auto join = [&](Eigen::Index x, Eigen::Index y) {
        x = find(x);
        y = find(y);
        if (x != y) root[static_cast<std::size_t>(std::max(x, y))] = std::min(x, y);
      };
      const double tol = cfg.degeneracy_rel * s.values.cwiseAbs().maxCoeff() + cfg.degeneracy_abs;
      for (Eigen::Index k = 1; k < n; ++k)
        if (s.values(k - 1) - s.values(k) <= tol) join(k - 1, k);
      const int nblk = *std::max_element(ids.begin(), ids.end()) + 1;
      for (int id = 0; id < nblk; ++id) {
        double top = 0;
        for (Eigen::Index k = 0; k < n; ++k)
          if (ids[static_cast<std::size_t>(k)] == id) top = std::max(top, std::abs(s.values(k)));
        Eigen::Index prev = -1;
        for (Eigen::Index k = 0; k < n; ++k) {
          if (ids[static_cast<std::size_t>(k)] != id) continue;
          if (prev >= 0 && s.values(prev) - s.values(k) <= cfg.noise_rel * top) join(prev, k);
          prev = k;
        }
      }
      std::vector<Eigen::Index> slot(nb, -1);
      for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index r = find(k);
        if (slot[static_cast<std::size_t>(r)] < 0) {
          slot[static_cast<std::size_t>(r)] = static_cast<Eigen::Index>(clusters.size());
          clusters.emplace_back();
        }
        clusters[static_cast<std::size_t>(slot[static_cast<std::size_t>(r)])].push_back(k);
      }
    }

    // weight of every branch inside every cluster
    const Mat ov = s.vectors.adjoint() * P;  // (eigvec, branch)
    struct Cand {
      double w;
      std::size_t c, b;
    };
    std::vector<Cand> cand;
    for (std::size_t c = 0; c < clusters.size(); ++c)
      for (std::size_t b = 0; b < nb; ++b) {
        double w = 0;
        for (Eigen::Index k : clusters[c]) w += std::norm(ov(k, static_cast<Eigen::Index>(b)));
        cand.push_back({w, c, b});
      }
    std::stable_sort(cand.begin(), cand.end(),
                     [](const Cand& x, const Cand& y) { return x.w > y.w; });
    std::vector<std::vector<std::size_t>> members(clusters.size());
    std::vector<char> taken(nb, 0);
    for (const auto& c : cand) {
      if (taken[c.b]) continue;
      if (members[c.c].size() >= clusters[c.c].size()) continue;
      members[c.c].push_back(c.b);
      taken[c.b] = 1;
    }

    for (std::size_t c = 0; c < clusters.size(); ++c) {
      const auto& cl = clusters[c];
      const auto sz = static_cast<Eigen::Index>(cl.size());
      auto& mem = members[c];
      std::sort(mem.begin(), mem.end());
      Mat Q(n, sz);
      Eigen::VectorXd qv(sz);
      for (Eigen::Index j = 0; j < sz; ++j) {
        Q.col(j) = s.vectors.col(cl[static_cast<std::size_t>(j)]);
        qv(j) = s.values(cl[static_cast<std::size_t>(j)]);
      }
      Mat Pm(n, sz);
      for (Eigen::Index j = 0; j < sz; ++j)
        Pm.col(j) = P.col(static_cast<Eigen::Index>(mem[static_cast<std::size_t>(j)]));
      const Mat C = Q.adjoint() * Pm;
      const Mat L = lowdin(C);
      Mat Y = Q * L;
      for (Eigen::Index j = 0; j < sz; ++j) {
        const std::size_t b = mem[static_cast<std::size_t>(j)];
        auto& br = res.branches[b];
        const double o = std::abs(br.vectors.back().dot(Y.col(j)));
        res.min_overlap = std::min(res.min_overlap, o);
        const double gap = gaps(s.values, cl[static_cast<std::size_t>(j)]);
        if (o < cfg.overlap_threshold) {
          std::ostringstream os;
          os << "branch " << b << " lost at sample " << i << " (overlap " << o
             << ", gap " << gap << ")";
          throw BranchAmbiguity(os.str(), i, gap);
        }
        Vec v = Y.col(j);
        const cplx g = br.vectors.back().dot(v);
        if (std::abs(g) > 0) v *= std::conj(g) / std::abs(g);
        br.vectors.push_back(std::move(v));
        // Rayleigh quotient inside the cluster
        br.values.push_back(
            (L.col(j).cwiseAbs2().transpose() * qv).value() /
            std::max(L.col(j).squaredNorm(), 1e-300));
        br.min_gap = std::min(br.min_gap, gap);
      }
    }
  }
  return res;
}

}  // namespace tgp
