#pragma once
#include <string>
#include <vector>

#include "tgp/hilbert_fock.hpp"

namespace tgp {

// frequencies in units of omega_q unless the caller picks otherwise
struct SystemParams {
  double omega_r = 1.0;
  double omega_q = 1.0;
  double E_c = 0.0;
  double g = 0.0;
  double delta() const { return omega_q - omega_r; }
  void validate() const;
};

struct BathParams {
  double kappa = 0.0;
  double gamma = 0.0;
  double gamma_phi = 0.0;
  void validate() const;
  bool dissipative() const { return kappa > 0 || gamma > 0 || gamma_phi > 0; }
  bool operator==(const BathParams&) const = default;
};

enum class DephasingOp { number, literal_bdag_bdag };

std::string to_string(DephasingOp op);
DephasingOp dephasing_from_string(const std::string& s);

struct CircuitParams {
  double C_g = 0;
  double C_sigma = 0;
  double E_J = 0;
  double E_c_energy = 0;
  double Z_r = 0;
  double R_K = 12906.40372;  // h/2e^2, ohm
};

Mat hamiltonian(const SystemParams& p, const TruncatedBasis& basis);
Mat dissipator_apply(const Mat& O, const Mat& rho);
Mat lindblad_rhs(const Mat& H, const BathParams& baths, DephasingOp op,
                 const Mat& rho);

// prebuilt jump operators for repeated right-hand-side evaluation
class LindbladModel {
 public:
  LindbladModel(const SystemParams& sys, const BathParams& baths,
                DephasingOp op, const TruncatedBasis& basis);
  LindbladModel(const Mat& H, const BathParams& baths, DephasingOp op);

  void rhs(const Mat& rho, Mat& out) const;
  Mat rhs(const Mat& rho) const;

  const Mat& H() const { return H_; }
  const TruncatedBasis& basis() const { return basis_; }
  const BathParams& baths() const { return baths_; }
  DephasingOp dephasing() const { return op_; }

 private:
  struct Channel {
    double rate;
    Mat O, Od, OdO;
  };
  void build_channels();

  Mat H_;
  BathParams baths_;
  DephasingOp op_;
  TruncatedBasis basis_;
  Mat Heff_;  // H - i/2 sum rate O†O
  std::vector<Channel> ch_;
};

double coupling_from_circuit(const CircuitParams& c, double omega_r);
// E_J/E_c >= 20
bool transmon_regime(const CircuitParams& c);

struct Rabi {
  double Omega;
  double tau;
};
Rabi rabi_frequency(double delta, double g);

}  // namespace tgp
