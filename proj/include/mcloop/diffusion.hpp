#pragma once

// Transfer functions of the 1-D diffusion equation on [0, L].
//
// Inputs v_* and outputs z_* at each end are either the concentration or
// its spatial gradient, chosen by the boundary kind at that end:
//   Dirichlet end: v = c(s,*),      z = dc/dr(s,*)
//   Neumann end:   v = dc/dr(s,*),  z = c(s,*)
// Every function here is pure and evaluates on the principal branch of
// sqrt(s), so that Re sqrt(s) >= 0 and exp(-r sqrt(s/mu)) decays in r.

#include <complex>
#include <string_view>
#include <utility>

#include <Eigen/Core>

namespace mcloop {

using cplx = std::complex<double>;
using Matrix2c = Eigen::Matrix<cplx, 2, 2>;

enum class BoundaryKind { Dirichlet, Neumann };

// Which end of the medium a signal enters or leaves.
enum class Side { Origin, Far };

enum class Quantity { Concentration, Gradient };

// How the output at position ell is derived from G_{r,*}.
enum class ZMode { Evaluate, SpatialDerivative, SpatialIntegral };

std::string_view to_string(BoundaryKind kind) noexcept;
std::string_view to_string(ZMode mode) noexcept;

// Two-letter tag of a boundary pair: "dd", "dn", "nd" or "nn".
std::string_view boundary_tag(BoundaryKind b0, BoundaryKind bL) noexcept;
// Parses a two-letter tag; throws Error(InvalidParam) on anything else.
std::pair<BoundaryKind, BoundaryKind> parse_boundary_tag(std::string_view tag);

class DiffusionChannel {
 public:
  // mu in um^2/s, length in um. Throws Error(InvalidParam) unless both > 0.
  DiffusionChannel(double mu, double length, BoundaryKind b0, BoundaryKind bL);

  double mu() const noexcept { return mu_; }
  double length() const noexcept { return length_; }
  BoundaryKind b0() const noexcept { return b0_; }
  BoundaryKind bL() const noexcept { return bL_; }
  BoundaryKind kind_at(Side side) const noexcept { return side == Side::Origin ? b0_ : bL_; }

  // L^2 omega / mu and its inverse.
  double normalize(double omega) const noexcept { return length_ * length_ * omega / mu_; }
  double denormalize(double omega_hat) const noexcept {
    return omega_hat * mu_ / (length_ * length_);
  }

 private:
  double mu_;
  double length_;
  BoundaryKind b0_;
  BoundaryKind bL_;
};

// A point s on the complex plane, normally s = j*omega.
struct ComplexFreq {
  cplx s;

  // Negative omega is accepted so that conjugate symmetry can be checked.
  static ComplexFreq jw(double omega) { return ComplexFreq{cplx(0.0, omega)}; }
  double omega() const noexcept { return s.imag(); }
};

// Smallest frequency used in place of s = 0 when a steady gain is wanted.
inline constexpr double kSteadyOmega = 1e-12;

// Floor under which |1 + K g(s,L)^2| is treated as a pole.
inline constexpr double kDenominatorFloor = 1e-300;

// g(s, r) = exp(-(r / sqrt(mu)) sqrt(s)); r may be negative.
cplx eval_g(const DiffusionChannel& channel, ComplexFreq s, double r);

// -1 when both ends share a kind (fixed-end reflection), +1 otherwise.
int reflection_coefficient(BoundaryKind b0, BoundaryKind bL) noexcept;

Quantity input_quantity(BoundaryKind kind) noexcept;
Quantity output_quantity(BoundaryKind kind) noexcept;

// Mode implied by the quantity entering at the source and leaving at ell.
ZMode infer_zmode(Quantity in, Quantity out) noexcept;

// Z_ell G_{r,*}(s) at an arbitrary position ell in [0, L].
//
// G_{r,*} = (K g(L-d) g(L) + g(d)) / (1 + K g(L)^2) with d = |r - *|.
// SpatialDerivative differentiates in r analytically. SpatialIntegral takes
// the primitive in r that carries no additive constant (sums of decaying
// exponentials only); for a Neumann source at r = L this is the integral
// from 0 to ell.
//
// Throws Error(InvalidParam) if ell is outside [0, L] and
// Error(DenominatorUnderflow) at a pole of the undamped channel.
cplx eval_G_general(const DiffusionChannel& channel, ComplexFreq s, Side source, double ell,
                    ZMode mode);

// Entry of the 2x2 matrix from the input at `source` to the output at
// `target`, with the mode inferred from the channel's boundary kinds.
cplx eval_G_entry(const DiffusionChannel& channel, ComplexFreq s, Side source, Side target);

// Closed-form 2x2 matrix for the channel's boundary pair, with rows indexed
// by output end and columns by input end. Hyperbolic functions are built
// from exp(-2 theta), Re theta >= 0, so nothing overflows.
//
// Throws Error(InvalidFrequency) for s == 0 exactly and
// Error(DenominatorUnderflow) at a pole.
Matrix2c eval_G_matrix(const DiffusionChannel& channel, ComplexFreq s);

// theta = (L / sqrt(mu)) sqrt(s).
cplx diffusion_argument(const DiffusionChannel& channel, ComplexFreq s);

}  // namespace mcloop
