#pragma once

// Interconnection of the diffusion matrix G, the two boundary systems H0 and
// HL, and the robot dynamics F0, FL:
//
//   [z0; zL] = G [v0; vL]
//   [v*; y*] = H* [z*; c*]
//   c*       = F* u*          (u* is the exogenous robot-side input)

#include <utility>

#include "mcloop/boundary.hpp"
#include "mcloop/diffusion.hpp"

namespace mcloop {

// gain / (tau s + 1); the default is the identity.
struct RobotDynamics {
  double gain = 1.0;
  double tau = 0.0;

  cplx eval(ComplexFreq s) const { return gain / (tau * s.s + 1.0); }
};

// Threshold on |1 - H11 G11| and on the closed-loop determinant.
inline constexpr double kFeedbackFloor = 1e-12;

class Interconnection {
 public:
  // Throws Error(InvalidParam) when a boundary system tagged with a kind does
  // not match the channel's boundary kind on that side.
  Interconnection(DiffusionChannel channel, StateSpaceLTI h0, StateSpaceLTI hL,
                  RobotDynamics f0 = {}, RobotDynamics fL = {});

  const DiffusionChannel& channel() const noexcept { return channel_; }
  const StateSpaceLTI& h0() const noexcept { return h0_; }
  const StateSpaceLTI& hL() const noexcept { return hL_; }
  const RobotDynamics& f0() const noexcept { return f0_; }
  const RobotDynamics& fL() const noexcept { return fL_; }
  const StateSpaceLTI& boundary(Side side) const noexcept {
    return side == Side::Origin ? h0_ : hL_;
  }

 private:
  DiffusionChannel channel_;
  StateSpaceLTI h0_;
  StateSpaceLTI hL_;
  RobotDynamics f0_;
  RobotDynamics fL_;
};

// 1 / (1 - H0_11 G11) for Side::Origin, 1 / (1 - HL_11 G22) for Side::Far.
cplx self_interference(const Interconnection& ic, ComplexFreq s, Side side);

struct ChannelGamma {
  cplx gamma_0L;  // c0 -> zL:  G21 S0 H0_12
  cplx gamma_L0;  // cL -> z0:  G12 SL HL_12
};

ChannelGamma channel_gamma(const Interconnection& ic, ComplexFreq s);

struct ClosedLoopSignals {
  cplx v0, vL;
  cplx z0, zL;
  cplx y0, yL;
};

// Exact solve of the whole loop for the robot-side inputs (c0, cL). Throws
// Error(FeedbackSingular) when the 2x2 loop matrix is numerically singular.
ClosedLoopSignals closed_loop_solve(const Interconnection& ic, ComplexFreq s, cplx c0, cplx cL);

// HL_21 Gamma_0L, the entire-channel gain when reflection at r = L is
// neglected.
cplx entire_channel_M0L_approx(const Interconnection& ic, ComplexFreq s);

struct ChannelResponse {
  double omega = 0.0;
  cplx S0, SL;
  cplx gamma_0L, gamma_L0;
  cplx M0L_exact;  // yL / c0 with cL = 0
  cplx MLL_exact;  // yL / cL with c0 = 0 (cross-talk)
  cplx M0L_approx;
};

ChannelResponse respond(const Interconnection& ic, ComplexFreq s);

}  // namespace mcloop
