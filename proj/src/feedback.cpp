#include "mcloop/feedback.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/LU>

#include "mcloop/errors.hpp"

namespace mcloop {

namespace {

void check_kind(const StateSpaceLTI& h, BoundaryKind expected, const char* side) {
  if (h.kind() && *h.kind() != expected) {
    std::ostringstream msg;
    msg << "boundary system at " << side << " imposes a " << to_string(*h.kind())
        << " condition but the channel expects " << to_string(expected);
    throw Error(ErrorKind::InvalidParam, msg.str());
  }
}

[[noreturn]] void throw_singular(const char* what, ComplexFreq s) {
  std::ostringstream msg;
  msg << what << " at omega = " << s.omega();
  throw Error(ErrorKind::FeedbackSingular, msg.str());
}

}  // namespace

Interconnection::Interconnection(DiffusionChannel channel, StateSpaceLTI h0, StateSpaceLTI hL,
                                 RobotDynamics f0, RobotDynamics fL)
    : channel_(channel), h0_(std::move(h0)), hL_(std::move(hL)), f0_(f0), fL_(fL) {
  check_kind(h0_, channel_.b0(), "r = 0");
  check_kind(hL_, channel_.bL(), "r = L");
}

cplx self_interference(const Interconnection& ic, ComplexFreq s, Side side) {
  const Matrix2c G = eval_G_matrix(ic.channel(), s);
  const Matrix2c H = eval_H(ic.boundary(side), s);
  const cplx loop = side == Side::Origin ? H(0, 0) * G(0, 0) : H(0, 0) * G(1, 1);
  const cplx denom = 1.0 - loop;
  if (std::abs(denom) < kFeedbackFloor) throw_singular("algebraic loop in 1 - H11 G11", s);
  return 1.0 / denom;
}

ChannelGamma channel_gamma(const Interconnection& ic, ComplexFreq s) {
  const Matrix2c G = eval_G_matrix(ic.channel(), s);
  const Matrix2c H0 = eval_H(ic.h0(), s);
  const Matrix2c HL = eval_H(ic.hL(), s);
  const cplx d0 = 1.0 - H0(0, 0) * G(0, 0);
  const cplx dL = 1.0 - HL(0, 0) * G(1, 1);
  if (std::abs(d0) < kFeedbackFloor || std::abs(dL) < kFeedbackFloor) {
    throw_singular("algebraic loop in 1 - H11 G11", s);
  }
  return {G(1, 0) / d0 * H0(0, 1), G(0, 1) / dL * HL(0, 1)};
}

ClosedLoopSignals closed_loop_solve(const Interconnection& ic, ComplexFreq s, cplx c0, cplx cL) {
  const Matrix2c G = eval_G_matrix(ic.channel(), s);
  const Matrix2c H0 = eval_H(ic.h0(), s);
  const Matrix2c HL = eval_H(ic.hL(), s);
  const cplx u0 = ic.f0().eval(s) * c0;
  const cplx uL = ic.fL().eval(s) * cL;

  // v = diag(H11) z + diag(H12) u, so (I - G diag(H11)) z = G diag(H12) u.
  Matrix2c feedback = Matrix2c::Zero();
  feedback(0, 0) = H0(0, 0);
  feedback(1, 1) = HL(0, 0);
  const Matrix2c M = Matrix2c::Identity() - G * feedback;
  const double scale = std::max(1.0, M.cwiseAbs2().sum());
  const cplx det = M.determinant();
  if (!(std::abs(det) >= kFeedbackFloor * scale)) throw_singular("closed loop is singular", s);

  Eigen::Matrix<cplx, 2, 1> forced;
  forced << H0(0, 1) * u0, HL(0, 1) * uL;
  Eigen::Matrix<cplx, 2, 1> rhs = G * forced;
  // Cramer's rule on the 2x2 system.
  const cplx z0 = (rhs(0) * M(1, 1) - M(0, 1) * rhs(1)) / det;
  const cplx zL = (M(0, 0) * rhs(1) - rhs(0) * M(1, 0)) / det;

  ClosedLoopSignals out;
  out.z0 = z0;
  out.zL = zL;
  out.v0 = H0(0, 0) * z0 + H0(0, 1) * u0;
  out.vL = HL(0, 0) * zL + HL(0, 1) * uL;
  out.y0 = H0(1, 0) * z0 + H0(1, 1) * u0;
  out.yL = HL(1, 0) * zL + HL(1, 1) * uL;
  return out;
}

cplx entire_channel_M0L_approx(const Interconnection& ic, ComplexFreq s) {
  const Matrix2c HL = eval_H(ic.hL(), s);
  return HL(1, 0) * channel_gamma(ic, s).gamma_0L;
}

ChannelResponse respond(const Interconnection& ic, ComplexFreq s) {
  ChannelResponse r;
  r.omega = s.omega();
  r.S0 = self_interference(ic, s, Side::Origin);
  r.SL = self_interference(ic, s, Side::Far);
  const ChannelGamma gamma = channel_gamma(ic, s);
  r.gamma_0L = gamma.gamma_0L;
  r.gamma_L0 = gamma.gamma_L0;
  r.M0L_exact = closed_loop_solve(ic, s, 1.0, 0.0).yL;
  r.MLL_exact = closed_loop_solve(ic, s, 0.0, 1.0).yL;
  r.M0L_approx = entire_channel_M0L_approx(ic, s);
  return r;
}

}  // namespace mcloop
