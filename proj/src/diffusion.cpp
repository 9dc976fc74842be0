#include "mcloop/diffusion.hpp"

#include <cmath>
#include <sstream>

#include "mcloop/errors.hpp"
#include "mcloop/hyperbolic.hpp"

namespace mcloop {

std::string_view to_string(BoundaryKind kind) noexcept {
  return kind == BoundaryKind::Dirichlet ? "dirichlet" : "neumann";
}

std::string_view to_string(ZMode mode) noexcept {
  switch (mode) {
    case ZMode::Evaluate:
      return "evaluate";
    case ZMode::SpatialDerivative:
      return "spatial-derivative";
    case ZMode::SpatialIntegral:
      return "spatial-integral";
  }
  return "?";
}

std::string_view boundary_tag(BoundaryKind b0, BoundaryKind bL) noexcept {
  if (b0 == BoundaryKind::Dirichlet) return bL == BoundaryKind::Dirichlet ? "dd" : "dn";
  return bL == BoundaryKind::Dirichlet ? "nd" : "nn";
}

std::pair<BoundaryKind, BoundaryKind> parse_boundary_tag(std::string_view tag) {
  auto kind = [&](char c) {
    if (c == 'd') return BoundaryKind::Dirichlet;
    if (c == 'n') return BoundaryKind::Neumann;
    throw Error(ErrorKind::InvalidParam, "unknown boundary tag '" + std::string(tag) + "'");
  };
  if (tag.size() != 2) {
    throw Error(ErrorKind::InvalidParam, "unknown boundary tag '" + std::string(tag) + "'");
  }
  return {kind(tag[0]), kind(tag[1])};
}

DiffusionChannel::DiffusionChannel(double mu, double length, BoundaryKind b0, BoundaryKind bL)
    : mu_(mu), length_(length), b0_(b0), bL_(bL) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw Error(ErrorKind::InvalidParam, "diffusion coefficient must be positive");
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw Error(ErrorKind::InvalidParam, "communication distance must be positive");
  }
}

namespace {

// sqrt(s / mu) on the principal branch.
cplx wavenumber(const DiffusionChannel& channel, ComplexFreq s) {
  return std::sqrt(s.s) / std::sqrt(channel.mu());
}

// 1 + K exp(-2 q L), using expm1 for K = -1.
cplx reflection_denominator(int K, cplx qL) {
  if (K < 0) return -hyperbolic::expm1(-2.0 * qL);
  return 1.0 + std::exp(-2.0 * qL);
}

void check_denominator(cplx denom, ComplexFreq s) {
  if (std::abs(denom) < kDenominatorFloor) {
    std::ostringstream msg;
    msg << "|1 + K g(s,L)^2| below floor at s = " << s.s;
    throw Error(ErrorKind::DenominatorUnderflow, msg.str());
  }
}

}  // namespace

cplx diffusion_argument(const DiffusionChannel& channel, ComplexFreq s) {
  return wavenumber(channel, s) * channel.length();
}

cplx eval_g(const DiffusionChannel& channel, ComplexFreq s, double r) {
  return std::exp(-wavenumber(channel, s) * r);
}

int reflection_coefficient(BoundaryKind b0, BoundaryKind bL) noexcept { return b0 == bL ? -1 : 1; }

Quantity input_quantity(BoundaryKind kind) noexcept {
  return kind == BoundaryKind::Dirichlet ? Quantity::Concentration : Quantity::Gradient;
}

Quantity output_quantity(BoundaryKind kind) noexcept {
  return kind == BoundaryKind::Dirichlet ? Quantity::Gradient : Quantity::Concentration;
}

ZMode infer_zmode(Quantity in, Quantity out) noexcept {
  if (in == out) return ZMode::Evaluate;
  return in == Quantity::Concentration ? ZMode::SpatialDerivative : ZMode::SpatialIntegral;
}

cplx eval_G_general(const DiffusionChannel& channel, ComplexFreq s, Side source, double ell,
                    ZMode mode) {
  const double L = channel.length();
  if (!(ell >= 0.0 && ell <= L)) {
    throw Error(ErrorKind::InvalidParam, "output position outside [0, L]");
  }
  const int K = reflection_coefficient(channel.b0(), channel.bL());
  const cplx q = wavenumber(channel, s);
  const cplx gL = std::exp(-q * L);
  const cplx denom = reflection_denominator(K, q * L);
  check_denominator(denom, s);

  // d = |r - *| and its slope dd/dr on [0, L].
  const double d = source == Side::Origin ? ell : L - ell;
  const double slope = source == Side::Origin ? 1.0 : -1.0;
  const cplx reflected = static_cast<double>(K) * std::exp(-q * (L - d)) * gL;
  const cplx direct = std::exp(-q * d);

  switch (mode) {
    case ZMode::Evaluate:
      return (reflected + direct) / denom;
    case ZMode::SpatialDerivative:
      return slope * q * (reflected - direct) / denom;
    case ZMode::SpatialIntegral:
      if (q == cplx(0.0)) {
        throw Error(ErrorKind::DenominatorUnderflow, "spatial integral at s = 0");
      }
      return slope * (reflected - direct) / (q * denom);
  }
  return {};
}

cplx eval_G_entry(const DiffusionChannel& channel, ComplexFreq s, Side source, Side target) {
  const ZMode mode = infer_zmode(input_quantity(channel.kind_at(source)),
                                 output_quantity(channel.kind_at(target)));
  const double ell = target == Side::Origin ? 0.0 : channel.length();
  return eval_G_general(channel, s, source, ell, mode);
}

Matrix2c eval_G_matrix(const DiffusionChannel& channel, ComplexFreq s) {
  if (s.s == cplx(0.0)) {
    throw Error(ErrorKind::InvalidFrequency,
                "s = 0 is not evaluated; pass a small omega such as kSteadyOmega");
  }
  const cplx q = wavenumber(channel, s);
  const cplx theta = q * channel.length();
  const cplx e1 = std::exp(-theta);
  const cplx e2 = std::exp(-2.0 * theta);
  const cplx one_minus = -hyperbolic::expm1(-2.0 * theta);
  const cplx one_plus = 1.0 + e2;

  const int K = reflection_coefficient(channel.b0(), channel.bL());
  check_denominator(K < 0 ? one_minus : one_plus, s);

  const cplx tanh_t = one_minus / one_plus;
  const cplx coth_t = one_plus / one_minus;
  const cplx sech_t = 2.0 * e1 / one_plus;
  const cplx csch_t = 2.0 * e1 / one_minus;

  Matrix2c G;
  switch (channel.b0()) {
    case BoundaryKind::Dirichlet:
      if (channel.bL() == BoundaryKind::Neumann) {
        G << -q * tanh_t, sech_t,
             sech_t, tanh_t / q;
      } else {
        G << -q * coth_t, q * csch_t,
             -q * csch_t, q * coth_t;
      }
      break;
    case BoundaryKind::Neumann:
      if (channel.bL() == BoundaryKind::Dirichlet) {
        // Gradients are taken along +r like every other entry; copying the dn
        // layout with the ends swapped would flip both diagonal signs.
        G << -tanh_t / q, sech_t,
             sech_t, q * tanh_t;
      } else {
        G << -coth_t / q, csch_t / q,
             -csch_t / q, coth_t / q;
      }
      break;
  }
  return G;
}

}  // namespace mcloop
