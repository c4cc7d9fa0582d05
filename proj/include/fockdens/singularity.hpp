#pragma once

#include <cstdint>
#include <functional>
#include <limits>

#include "fockdens/algebra.hpp"
#include "fockdens/estimate.hpp"
#include "fockdens/hypersurface.hpp"

namespace fockdens {

/// c(n) = 1 / (π^n 2^n (n-1)), so that G = -c(n)|z-ζ|^{2-2n}.
double newton_constant(int n);

/// G(z,ζ); -inf when z = ζ. Throws for n = 1.
double newton_potential(const cvec& z, const cvec& zeta);

/// Mean of G(ζ,x) over x ∈ B(z,r), by direction sampling around ζ: in polar
/// coordinates about ζ the kernel |x-ζ|^{2-2n} cancels against the Jacobian,
/// leaving (s_out^2 - s_in^2)/2 per direction.
Estimate ball_mean_newton(const cvec& z, const cvec& zeta, double r, int directions,
                          std::uint64_t seed);

/// Γ_r(z,ζ) = G(z,ζ) - mean_{x∈B(z,r)} G(ζ,x); -inf when ζ = z.
Estimate gamma_r(const cvec& z, const cvec& zeta, double r, int budget, std::uint64_t seed);

enum class SingularityRoute { newton, logT };

struct SingularityValue {
  double value = 0.0;  // -inf on W
  SingularityRoute route = SingularityRoute::logT;
  double quadrature_error = 0.0;

  bool on_surface() const { return value == -std::numeric_limits<double>::infinity(); }
};

const char* route_name(SingularityRoute r);

/// s_r through the Newton potential: a surface integral of Γ_r(z,·) over W∩B(z,r).
SingularityValue s_r_newton(const Hypersurface& h, const cvec& z, double r, int budget,
                            std::uint64_t seed);

/// s_r = log|T(z)| - mean of log|T| over B(z,r).
SingularityValue s_r_logT(const Hypersurface& h, const cvec& z, double r, int budget,
                          std::uint64_t seed);

/// Same as s_r_logT for any log-modulus function (e.g. log|e^h T|).
SingularityValue s_r_log_modulus(const std::function<double(const cvec&)>& log_modulus, const cvec& z,
                                 double r, int budget, std::uint64_t seed);

}  // namespace fockdens
