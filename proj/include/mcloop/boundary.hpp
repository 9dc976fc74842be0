#pragma once

// Boundary systems: LTI realizations of the membrane between the medium and
// a robot, with inputs (z, c) and outputs (v, y).
//
//   z  quantity read from the medium at the boundary
//   c  concentration inside the robot
//   v  quantity imposed on the medium (concentration or gradient)
//   y  signal delivered into the robot

#include <array>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "mcloop/diffusion.hpp"

namespace mcloop {

struct TransmembraneParams {
  double k = 0.0;    // membrane transport rate, 1/s
  double mu = 0.0;   // um^2/s
  double dr = 1.0;   // boundary-layer thickness, um
};

struct LigandReceptorParams {
  double k_on = 0.0;   // adsorption rate
  double k_off = 0.0;  // desorption rate, 1/s
  double k_re = 0.0;   // transduction rate, 1/s
  double R = 0.0;      // receptor count
  double mu = 0.0;     // um^2/s
};

class StateSpaceLTI {
 public:
  // A: n x n, B: n x 2, C: 2 x n, D: 2 x 2. Throws Error(InvalidParam) on
  // inconsistent shapes or non-finite entries. `kind` records which boundary
  // condition the realization imposes, when known.
  StateSpaceLTI(Eigen::MatrixXd A, Eigen::MatrixXd B, Eigen::MatrixXd C, Eigen::Matrix2d D,
                std::array<std::string, 2> input_labels = {"z", "c"},
                std::array<std::string, 2> output_labels = {"v", "y"},
                std::optional<BoundaryKind> kind = std::nullopt);

  // Memoryless system y = D u (n = 0).
  static StateSpaceLTI static_gain(const Eigen::Matrix2d& D);

  const Eigen::MatrixXd& A() const noexcept { return A_; }
  const Eigen::MatrixXd& B() const noexcept { return B_; }
  const Eigen::MatrixXd& C() const noexcept { return C_; }
  const Eigen::Matrix2d& D() const noexcept { return D_; }
  Eigen::Index order() const noexcept { return A_.rows(); }
  const std::array<std::string, 2>& input_labels() const noexcept { return inputs_; }
  const std::array<std::string, 2>& output_labels() const noexcept { return outputs_; }
  std::optional<BoundaryKind> kind() const noexcept { return kind_; }

 private:
  Eigen::MatrixXd A_;
  Eigen::MatrixXd B_;
  Eigen::MatrixXd C_;
  Eigen::Matrix2d D_;
  std::array<std::string, 2> inputs_;
  std::array<std::string, 2> outputs_;
  std::optional<BoundaryKind> kind_;
};

// Passive transport across a membrane (a dynamic Dirichlet boundary):
//   dx/dt = -k x + (mu/dr) dc/dr(0) + k c0,   c(0) = x,   y = k (x - c0).
StateSpaceLTI make_transmembrane(const TransmembraneParams& p);

// Receptor binding at the far end (a dynamic Neumann boundary). The
// realization gives
//   H11(s) = (R k_on / mu) s / (s + k_off),   H21(s) = k_re k_on / (s + k_off)
// and H12 = H22 = 0.
StateSpaceLTI make_ligand_receptor(const LigandReceptorParams& p);

// Singular-resolvent floor on |det(sI - A)|.
inline constexpr double kResolventFloor = 1e-300;

// C (sI - A)^{-1} B + D via an LU solve. Throws Error(SingularResolvent) at
// a pole of the boundary system.
Matrix2c eval_H(const StateSpaceLTI& ss, ComplexFreq s);

}  // namespace mcloop
