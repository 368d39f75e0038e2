#ifndef RRD_CLASSICAL_HPP
#define RRD_CLASSICAL_HPP

#include <span>
#include <vector>

#include "rrd/prob.hpp"

namespace rrd {

// Converged slope-parametric solution for a fixed source.
struct ClassicalSolution {
  double slope = 0.0;   // s <= 0, nats per distortion unit
  Kernel kernel;        // tilted kernel q*
  ProbVector output;    // optimal reproduction marginal nu*
  double rate = 0.0;    // I(mu; q*) in nats
  double distortion = 0.0;
  int iterations = 0;
  bool converged = false;
};

// One sample of a rate-distortion curve.
struct CurvePoint {
  double distortion = 0.0;
  double rate = 0.0;  // nats
  double slope = 0.0;
  double lambda = 0.0;            // KL-ball multiplier; 0 for classical points
  double kl = 0.0;                // achieved KL of the worst source; 0 classical
  double worst_distortion = 0.0;  // worst-case distortion over the ball
  bool converged = true;
};

// Smallest achievable expected distortion for this source.
double min_distortion(const ProbVector& mu, const DistortionMatrix& rho);

// Zero-rate distortion: min over single reproduction points y of E_mu rho(.,y).
double zero_rate_distortion(const ProbVector& mu, const DistortionMatrix& rho);

// Alternating tilt/marginal iteration at fixed slope s <= 0 from a strictly
// positive initial output marginal. NoConvergence is reported via the
// `converged` flag, not an error.
ClassicalSolution ba_fixed_point(const ProbVector& mu, const DistortionMatrix& rho,
                                 double s, const ProbVector& init_output,
                                 double tol = 1e-10, int max_iter = 100000);

// Runs ba_fixed_point at slope s and evaluates the rate through the
// parametric form R = s D - sum_x mu(x) ln sum_y e^{s rho(x,y)} nu*(y).
CurvePoint rate_at_slope(const ProbVector& mu, const DistortionMatrix& rho, double s,
                         double tol = 1e-10);

// Solves for the rate at distortion budget D by bisection on the slope.
// Throws InfeasibleBudget when D < min_distortion; returns the degenerate
// zero-rate solution when D >= zero_rate_distortion.
ClassicalSolution classical_rd(const ProbVector& mu, const DistortionMatrix& rho,
                               double budget, double tol = 1e-9,
                               double ba_tol = 1e-10, int max_iter = 100000);

// One CurvePoint per slope, sorted by distortion ascending. threads == 1 is
// the serial reference path.
std::vector<CurvePoint> rd_curve(const ProbVector& mu, const DistortionMatrix& rho,
                                 std::span<const double> slopes, double tol = 1e-10,
                                 int threads = 0);

}  // namespace rrd

#endif  // RRD_CLASSICAL_HPP
