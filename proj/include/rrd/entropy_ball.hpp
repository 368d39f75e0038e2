#ifndef RRD_ENTROPY_BALL_HPP
#define RRD_ENTROPY_BALL_HPP

#include <span>

#include "rrd/prob.hpp"

namespace rrd {

// Solution of a KL-constrained linear maximization over the ball
// {mu' : KL(mu'||mu) <= radius}.
struct TiltResult {
  double value = 0.0;        // sup of sum ell d(mu')
  double multiplier = 0.0;   // temperature alpha of the attaining tilt
  ProbVector maximizer;      // the attaining distribution
  double achieved_kl = 0.0;  // KL(maximizer || mu)
  bool constraint_active = false;
};

// True iff every entry is finite (guards against -inf sentinels).
bool check_bounded_below(std::span<const double> ell);

// mu_tilt(x) = e^{ell(x)/scale} mu(x) / Z, max-subtracted. Throws
// ScaleNonPositive when scale <= 0.
ProbVector tilted_distribution(std::span<const double> ell, const ProbVector& mu,
                               double scale);

// Zero-temperature limit of the tilted family: mass proportional to mu over
// the argmax set of ell restricted to the support of mu.
ProbVector zero_temperature_tilt(std::span<const double> ell, const ProbVector& mu);

// scale * ln sum_x e^{ell(x)/scale} mu(x); equals
// sup_nu { sum ell dnu - scale * KL(nu||mu) }.
double free_energy(std::span<const double> ell, const ProbVector& mu, double scale);

// sup over the KL ball of the linear functional sum ell d(mu'). Solves for
// the tilt temperature alpha with KL(tilt||mu) = radius by monotone log-scale
// bisection; detects the inactive-constraint (zero-temperature) regime.
TiltResult worstcase_expectation(std::span<const double> ell, const ProbVector& mu,
                                 double radius, double tol = 1e-9);

}  // namespace rrd

#endif  // RRD_ENTROPY_BALL_HPP
