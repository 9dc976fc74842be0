#include "mcloop/boundary.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/LU>

#include "mcloop/errors.hpp"

namespace mcloop {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(ErrorKind::InvalidParam, std::string(name) + " must be positive");
  }
}

}  // namespace

StateSpaceLTI::StateSpaceLTI(Eigen::MatrixXd A, Eigen::MatrixXd B, Eigen::MatrixXd C,
                             Eigen::Matrix2d D, std::array<std::string, 2> input_labels,
                             std::array<std::string, 2> output_labels,
                             std::optional<BoundaryKind> kind)
    : A_(std::move(A)),
      B_(std::move(B)),
      C_(std::move(C)),
      D_(D),
      inputs_(std::move(input_labels)),
      outputs_(std::move(output_labels)),
      kind_(kind) {
  const Eigen::Index n = A_.rows();
  if (A_.cols() != n || B_.rows() != n || B_.cols() != 2 || C_.rows() != 2 || C_.cols() != n) {
    throw Error(ErrorKind::InvalidParam, "state-space dimensions are inconsistent");
  }
  if (!A_.allFinite() || !B_.allFinite() || !C_.allFinite() || !D_.allFinite()) {
    throw Error(ErrorKind::InvalidParam, "state-space matrices contain non-finite entries");
  }
}

StateSpaceLTI StateSpaceLTI::static_gain(const Eigen::Matrix2d& D) {
  return StateSpaceLTI(Eigen::MatrixXd(0, 0), Eigen::MatrixXd(0, 2), Eigen::MatrixXd(2, 0), D);
}

StateSpaceLTI make_transmembrane(const TransmembraneParams& p) {
  require_positive(p.k, "k");
  require_positive(p.mu, "mu");
  require_positive(p.dr, "dr");
  Eigen::MatrixXd A(1, 1), B(1, 2), C(2, 1);
  A << -p.k;
  B << p.mu / p.dr, p.k;
  C << 1.0, p.k;
  Eigen::Matrix2d D;
  D << 0.0, 0.0, 0.0, -p.k;
  return StateSpaceLTI(A, B, C, D, {"dc/dr(0)", "c0"}, {"c(0)", "y0"},
                       BoundaryKind::Dirichlet);
}

StateSpaceLTI make_ligand_receptor(const LigandReceptorParams& p) {
  require_positive(p.k_on, "k_on");
  require_positive(p.k_off, "k_off");
  require_positive(p.k_re, "k_re");
  require_positive(p.R, "R");
  require_positive(p.mu, "mu");
  // The receptor count scales the gradient path only, so the state is the
  // bound fraction per receptor.
  const double gain = p.R / p.mu;
  Eigen::MatrixXd A(1, 1), B(1, 2), C(2, 1);
  A << -p.k_off;
  B << p.k_on, 0.0;
  C << -p.k_off * gain, p.k_re;
  Eigen::Matrix2d D;
  D << p.k_on * gain, 0.0, 0.0, 0.0;
  return StateSpaceLTI(A, B, C, D, {"c(L)", "cL"}, {"dc/dr(L)", "yL"},
                       BoundaryKind::Neumann);
}

Matrix2c eval_H(const StateSpaceLTI& ss, ComplexFreq s) {
  const Eigen::Index n = ss.order();
  Matrix2c H = ss.D().cast<cplx>();
  if (n == 0) return H;

  Eigen::MatrixXcd resolvent = -ss.A().cast<cplx>();
  resolvent.diagonal().array() += s.s;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(resolvent);
  if (!(std::abs(lu.determinant()) >= kResolventFloor)) {
    std::ostringstream msg;
    msg << "sI - A is singular at s = " << s.s;
    throw Error(ErrorKind::SingularResolvent, msg.str());
  }
  const Eigen::MatrixXcd X = lu.solve(ss.B().cast<cplx>());
  H += ss.C().cast<cplx>() * X;
  return H;
}

}  // namespace mcloop
