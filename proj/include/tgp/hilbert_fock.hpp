#pragma once
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace tgp {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// |m,n>: m transmon level, n photon number
struct BasisState {
  int m = 0;
  int n = 0;
  int excitations() const { return m + n; }
  std::string label() const;
  bool operator==(const BasisState&) const = default;
};

struct TruncatedBasis {
  int cutoff = 0;
  std::vector<BasisState> states;

  std::size_t dim() const { return states.size(); }
  // -1 when (m,n) lies outside the truncation
  int index_of(int m, int n) const;
  // half-open index range of the shell with k excitations
  std::pair<std::size_t, std::size_t> shell(int k) const;
  // shell of every basis index
  std::vector<int> shell_of_index() const;
};

TruncatedBasis build_basis(int cutoff);
// inverse of the dimension formula, throws if dim is not triangular
TruncatedBasis basis_for_dim(std::size_t dim);

Mat photon_annihilation(const TruncatedBasis& basis);
Mat transmon_annihilation(const TruncatedBasis& basis);

Vec basis_vector(const TruncatedBasis& basis, int m, int n);

}  // namespace tgp
