#pragma once

// Reference solutions computed without the library's closed forms.

#include <complex>

#include <Eigen/Core>
#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include "mcloop/diffusion.hpp"

namespace oracle {

using mcloop::BoundaryKind;
using mcloop::cplx;

// State [c, dc/dr] of c'' = (s/mu) c at position r, for the boundary value
// problem with unit input at `source` and zero input at the other end.
// The transfer matrix exp(A r) comes from Eigen's Pade-based exponential, so
// no hyperbolic identity from the library is reused.
struct BvpSolution {
  Eigen::Matrix2cd A;
  Eigen::Vector2cd x0;

  Eigen::Vector2cd at(double r) const {
    const Eigen::Matrix2cd Ar = A * cplx(r, 0.0);
    return Ar.exp() * x0;
  }
};

inline int quantity_index(BoundaryKind kind, bool input) {
  // Dirichlet: input c, output dc/dr. Neumann: input dc/dr, output c.
  const bool concentration = (kind == BoundaryKind::Dirichlet) == input;
  return concentration ? 0 : 1;
}

inline BvpSolution solve_bvp(const mcloop::DiffusionChannel& ch, cplx s, mcloop::Side source) {
  BvpSolution sol;
  sol.A << cplx(0.0), cplx(1.0), s / ch.mu(), cplx(0.0);
  const Eigen::Matrix2cd AL = sol.A * cplx(ch.length(), 0.0);
  const Eigen::Matrix2cd phi = AL.exp();
  const int i0 = quantity_index(ch.b0(), true);
  const int iL = quantity_index(ch.bL(), true);
  // Row 0: input quantity at r = 0; row 1: input quantity at r = L.
  Eigen::Matrix2cd M;
  M.row(0).setZero();
  M(0, i0) = 1.0;
  M.row(1) = phi.row(iL);
  Eigen::Vector2cd rhs = Eigen::Vector2cd::Zero();
  rhs(source == mcloop::Side::Origin ? 0 : 1) = 1.0;
  sol.x0 = M.partialPivLu().solve(rhs);
  return sol;
}

// Output quantity at `target` for unit input at `source`.
inline cplx bvp_entry(const mcloop::DiffusionChannel& ch, cplx s, mcloop::Side source,
                      mcloop::Side target) {
  const BvpSolution sol = solve_bvp(ch, s, source);
  const bool origin = target == mcloop::Side::Origin;
  const Eigen::Vector2cd x = origin ? sol.x0 : sol.at(ch.length());
  return x(quantity_index(ch.kind_at(target), false));
}

}  // namespace oracle
