#ifndef RRD_ROBUST_HPP
#define RRD_ROBUST_HPP

#include <cstdint>
#include <vector>

#include "rrd/classical.hpp"
#include "rrd/prob.hpp"

namespace rrd {

// Theorem-style worst-source tilt exponent. The default ties the tilt
// e^{ell/lambda} to the closed-form value (the self-consistent reading);
// `literal_lambda` evaluates the alternative exponent -lambda for
// side-by-side comparison (its rate will not match the mutual information).
enum class ExponentVariant { inverse_lambda, literal_lambda };

struct RobustOptions {
  double inner_tol = 1e-10;   // max-norm fixed-point tolerance on nu
  double s_tol = 1e-9;        // distortion residual for the slope bisection
  double lambda_tol = 1e-9;   // KL residual for the lambda bisection
  int max_inner = 100000;     // fixed-point sweep cap
  int max_outer = 2000;       // total root-finding evaluation cap
  ExponentVariant variant = ExponentVariant::inverse_lambda;
};

// Converged saddle data for the KL-ball rate-distortion game.
struct RobustSolution {
  double slope = 0.0;             // s <= 0
  double lambda = 0.0;            // KL-ball multiplier (>= 0; +inf when radius 0)
  ProbVector worst_source;        // mu*
  ProbVector output;              // nu*
  Kernel kernel;                  // q*
  double rate = 0.0;              // saddle value in nats
  double achieved_distortion = 0.0;  // E_{mu*, q*} rho
  double achieved_kl = 0.0;          // KL(mu* || mu)
  double lemma2_radius = 0.0;        // enlarged radius around mu*
  double worst_distortion = 0.0;     // sup over the ball of E_{mu', q*} rho
  bool kl_constraint_active = true;
  bool converged = false;
};

// Closed-form saddle value s D + lambda R + lambda ln sum_x
// (sum_y e^{s rho(x,y)} nu(y))^{-1/lambda} mu(x); lambda == 0 uses the
// zero-temperature limit, lambda == +inf the classical parametric form.
// Throws LambdaNonPositive for negative lambda.
double robust_rate_value(double s, double lambda, const ProbVector& output,
                         const ProblemInstance& instance);

// Saddle solver driven by the worst-source parameterization
// mu*(x) ~ (sum_y e^{s rho(x,y)} nu(y))^{-1/lambda} mu(x): outer bisection on
// lambda matches KL(mu*||mu) = radius, inner bisection on s matches the
// distortion budget, innermost damped fixed point on nu.
RobustSolution maxmin_solve(const ProblemInstance& instance,
                            const RobustOptions& opts = {});
RobustSolution maxmin_solve(const ProblemInstance& instance, double tol, int max_iter);

// Same saddle through the kernel parameterization ell(x) =
// sum_y q(x,y) ln(e^{-s rho(x,y)} q(x,y)/nu(y)); independent start and
// floating-point route, used as a cross-check of the saddle.
RobustSolution minimax_solve(const ProblemInstance& instance,
                             const RobustOptions& opts = {});
RobustSolution minimax_solve(const ProblemInstance& instance, double tol, int max_iter);

// Enlarged-ball radius R* around mu*: every mu' in the nominal ball satisfies
// KL(mu'||mu*) <= R*, with equality at the tilted extremal.
struct Lemma2Report {
  double rstar = 0.0;
  double alpha = 0.0;        // tilt temperature of the extremal
  ProbVector maximizer;      // the extremal mu'* attaining R*
  bool attained = true;      // false when the extremal tilt is degenerate
};
Lemma2Report lemma2_report(const RobustSolution& solution,
                           const ProblemInstance& instance, double tol = 1e-9);
double lemma2_radius(const RobustSolution& solution, const ProblemInstance& instance,
                     double tol = 1e-9);

// Monte-Carlo audit of the saddle property: sampled sources in the ball
// cannot beat the rate against q*, feasible kernels cannot go below it
// against mu*, and classical rates over the ball never exceed it.
struct SaddleReport {
  int samples = 0;
  int source_violations = 0;   // I(mu', q*) > rate + tol
  int kernel_violations = 0;   // I(mu*, q) < rate - tol
  int classical_violations = 0;  // R_{mu'}(D) > rate + tol
  double max_source_gap = 0.0;
  double min_kernel_gap = 0.0;
  double max_classical_gap = 0.0;
  bool pass() const {
    return source_violations == 0 && kernel_violations == 0 &&
           classical_violations == 0;
  }
};
SaddleReport saddle_check(const RobustSolution& solution,
                          const ProblemInstance& instance, int samples, double tol,
                          std::uint64_t seed = 0x5add1eULL);

// Robust R(D) sweep over budgets; points sorted by distortion ascending.
std::vector<CurvePoint> robust_curve(const ProblemInstance& instance,
                                     std::span<const double> budgets,
                                     const RobustOptions& opts = {}, int threads = 0);

}  // namespace rrd

#endif  // RRD_ROBUST_HPP
