#include "tgp/hilbert_fock.hpp"

#include <cmath>

#include "tgp/errors.hpp"

namespace tgp {

std::string BasisState::label() const {
  return "|" + std::to_string(m) + std::to_string(n) + ">";
}

int TruncatedBasis::index_of(int m, int n) const {
  if (m < 0 || n < 0 || m + n > cutoff) return -1;
  const int s = m + n;
  // shell s starts at s(s+1)/2 and is ordered by ascending n
  return s * (s + 1) / 2 + n;
}

std::pair<std::size_t, std::size_t> TruncatedBasis::shell(int k) const {
  if (k < 0 || k > cutoff) throw InvalidArgument("shell index out of range");
  const std::size_t lo = static_cast<std::size_t>(k * (k + 1) / 2);
  return {lo, lo + static_cast<std::size_t>(k + 1)};
}

std::vector<int> TruncatedBasis::shell_of_index() const {
  std::vector<int> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.excitations());
  return out;
}

TruncatedBasis build_basis(int cutoff) {
  if (cutoff < 1) throw InvalidArgument("cutoff must be >= 1");
  TruncatedBasis b;
  b.cutoff = cutoff;
  for (int s = 0; s <= cutoff; ++s)
    for (int n = 0; n <= s; ++n) b.states.push_back({s - n, n});
  return b;
}

TruncatedBasis basis_for_dim(std::size_t dim) {
  for (int c = 1; c < 64; ++c) {
    const std::size_t d = static_cast<std::size_t>((c + 1) * (c + 2) / 2);
    if (d == dim) return build_basis(c);
    if (d > dim) break;
  }
  throw InvalidArgument("dimension " + std::to_string(dim) +
                        " is not a truncated two-mode basis");
}

Mat photon_annihilation(const TruncatedBasis& basis) {
  const auto d = static_cast<Eigen::Index>(basis.dim());
  Mat a = Mat::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto& s = basis.states[static_cast<std::size_t>(j)];
    if (s.n == 0) continue;
    const int i = basis.index_of(s.m, s.n - 1);
    if (i >= 0) a(i, j) = std::sqrt(static_cast<double>(s.n));
  }
  return a;
}

Mat transmon_annihilation(const TruncatedBasis& basis) {
  const auto d = static_cast<Eigen::Index>(basis.dim());
  Mat b = Mat::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto& s = basis.states[static_cast<std::size_t>(j)];
    if (s.m == 0) continue;
    const int i = basis.index_of(s.m - 1, s.n);
    if (i >= 0) b(i, j) = std::sqrt(static_cast<double>(s.m));
  }
  return b;
}

Vec basis_vector(const TruncatedBasis& basis, int m, int n) {
  const int i = basis.index_of(m, n);
  if (i < 0) throw InvalidArgument("state outside truncation");
  Vec v = Vec::Zero(static_cast<Eigen::Index>(basis.dim()));
  v(i) = 1.0;
  return v;
}

}  // namespace tgp
