#include "tgp/dynamics_model.hpp"

#include <cmath>
#include <numbers>

#include "tgp/errors.hpp"

namespace tgp {

void SystemParams::validate() const {
  if (!(omega_q > 0)) throw InvalidArgument("omega_q must be positive");
  if (!(omega_r > 0)) throw InvalidArgument("omega_r must be positive");
  if (!(E_c >= 0)) throw InvalidArgument("E_c must be non-negative");
  if (!std::isfinite(g)) throw InvalidArgument("g must be finite");
}

void BathParams::validate() const {
  if (!(kappa >= 0) || !(gamma >= 0) || !(gamma_phi >= 0))
    throw InvalidArgument("bath rates must be non-negative");
}

std::string to_string(DephasingOp op) {
  return op == DephasingOp::number ? "number" : "literal";
}

DephasingOp dephasing_from_string(const std::string& s) {
  if (s == "number") return DephasingOp::number;
  if (s == "literal" || s == "literal_bdag_bdag")
    return DephasingOp::literal_bdag_bdag;
  throw InvalidArgument("unknown dephasing operator '" + s + "'");
}

Mat hamiltonian(const SystemParams& p, const TruncatedBasis& basis) {
  p.validate();
  if (basis.dim() == 0) throw InvalidArgument("empty basis");
  const Mat a = photon_annihilation(basis);
  const Mat b = transmon_annihilation(basis);
  const Mat ad = a.adjoint();
  const Mat bd = b.adjoint();
  // b†a stays inside every shell; a†b is its adjoint
  const Mat X = bd * a;
  Mat H = p.omega_r * (ad * a) + p.omega_q * (bd * b) -
          (0.5 * p.E_c) * (bd * bd * b * b) + p.g * (X + X.adjoint());
  return H;
}

Mat dissipator_apply(const Mat& O, const Mat& rho) {
  if (O.rows() != O.cols() || rho.rows() != rho.cols() ||
      O.rows() != rho.rows())
    throw InvalidArgument("dissipator: dimension mismatch");
  const Mat Od = O.adjoint();
  const Mat OdO = Od * O;
  return O * rho * Od - 0.5 * (OdO * rho + rho * OdO);
}

LindbladModel::LindbladModel(const SystemParams& sys, const BathParams& baths,
                             DephasingOp op, const TruncatedBasis& basis)
    : H_(hamiltonian(sys, basis)), baths_(baths), op_(op), basis_(basis) {
  baths_.validate();
  build_channels();
}

LindbladModel::LindbladModel(const Mat& H, const BathParams& baths,
                             DephasingOp op)
    : H_(H), baths_(baths), op_(op) {
  if (H.rows() != H.cols()) throw InvalidArgument("H must be square");
  basis_ = basis_for_dim(static_cast<std::size_t>(H.rows()));
  baths_.validate();
  build_channels();
}

void LindbladModel::build_channels() {
  const Mat a = photon_annihilation(basis_);
  const Mat b = transmon_annihilation(basis_);
  const Mat bd = b.adjoint();
  auto add = [&](double rate, const Mat& O) {
    if (rate == 0.0) return;
    Channel c{rate, O, O.adjoint(), O.adjoint() * O};
    ch_.push_back(std::move(c));
  };
  add(baths_.kappa, a);
  add(baths_.gamma, b);
  add(baths_.gamma_phi, op_ == DephasingOp::number ? Mat(bd * b) : Mat(bd * bd));
  Heff_ = H_;
  for (const auto& c : ch_) Heff_ -= cplx(0.0, 0.5 * c.rate) * c.OdO;
}

void LindbladModel::rhs(const Mat& rho, Mat& out) const {
  if (rho.rows() != H_.rows() || rho.cols() != H_.cols())
    throw InvalidArgument("lindblad_rhs: dimension mismatch");
  const cplx mi(0.0, -1.0);
  out.noalias() = mi * (Heff_ * rho);
  out.noalias() -= mi * (rho * Heff_.adjoint());
  for (const auto& c : ch_) out.noalias() += c.rate * (c.O * rho * c.Od);
}

Mat LindbladModel::rhs(const Mat& rho) const {
  Mat out(rho.rows(), rho.cols());
  rhs(rho, out);
  return out;
}

Mat lindblad_rhs(const Mat& H, const BathParams& baths, DephasingOp op,
                 const Mat& rho) {
  if (rho.rows() != H.rows() || rho.cols() != H.cols())
    throw InvalidArgument("lindblad_rhs: dimension mismatch");
  return LindbladModel(H, baths, op).rhs(rho);
}

double coupling_from_circuit(const CircuitParams& c, double omega_r) {
  if (!(c.C_g > 0) || !(c.C_sigma > 0) || !(c.E_J > 0) ||
      !(c.E_c_energy > 0) || !(c.Z_r > 0) || !(c.R_K > 0) || !(omega_r > 0))
    throw InvalidArgument("circuit parameters must be positive");
  return omega_r * (c.C_g / c.C_sigma) *
         std::pow(c.E_J / (2.0 * c.E_c_energy), 0.25) *
         std::sqrt(std::numbers::pi * c.Z_r / c.R_K);
}

bool transmon_regime(const CircuitParams& c) {
  return c.E_c_energy > 0 && c.E_J / c.E_c_energy >= 20.0;
}

Rabi rabi_frequency(double delta, double g) {
  const double W = std::sqrt(delta * delta + 4.0 * g * g);
  if (W == 0.0) throw InvalidArgument("rabi_frequency: delta = g = 0");
  return {W, 2.0 * std::numbers::pi / W};
}

}  // namespace tgp
