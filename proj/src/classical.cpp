#include "rrd/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rrd/errors.hpp"
#include "rrd/logsum.hpp"
#include "rrd/parallel.hpp"

namespace rrd {

namespace {

// ln sum_y e^{s rho(x,y)} nu(y) for every source row, max-subtracted so any
// slope magnitude is safe.
void row_log_partition(const DistortionMatrix& rho, double s,
                       std::span<const double> nu, std::vector<double>& out) {
  std::size_t m = rho.rows(), n = rho.cols();
  out.resize(m);
  std::vector<double> a(n);
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = 0; y < n; ++y)
      a[y] = (nu[y] > 0.0) ? s * rho(x, y) + std::log(nu[y]) : kNegInf;
    out[x] = log_sum_exp(a);
  }
}

Kernel tilted_kernel(const DistortionMatrix& rho, double s, std::span<const double> nu,
                     std::span<const double> logz) {
  std::size_t m = rho.rows(), n = rho.cols();
  Kernel q(m, n);
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < n; ++y)
      q(x, y) = (nu[y] > 0.0) ? std::exp(s * rho(x, y) + std::log(nu[y]) - logz[x]) : 0.0;
  return q;
}

ClassicalSolution degenerate_zero_rate(const ProbVector& mu,
                                       const DistortionMatrix& rho) {
  std::size_t best = 0;
  double bestd = std::numeric_limits<double>::infinity();
  for (std::size_t y = 0; y < rho.cols(); ++y) {
    double d = 0.0;
    for (std::size_t x = 0; x < rho.rows(); ++x) d += mu[x] * rho(x, y);
    if (d < bestd) {
      bestd = d;
      best = y;
    }
  }
  ClassicalSolution sol;
  sol.slope = 0.0;
  sol.output = ProbVector::point_mass(rho.cols(), best);
  sol.kernel = Kernel::constant_rows(rho.rows(), sol.output);
  sol.rate = 0.0;
  sol.distortion = bestd;
  sol.iterations = 0;
  sol.converged = true;
  return sol;
}

}  // namespace

double min_distortion(const ProbVector& mu, const DistortionMatrix& rho) {
  double s = 0.0;
  for (std::size_t x = 0; x < rho.rows(); ++x)
    if (mu[x] > 0.0) s += mu[x] * rho.row_min(x);
  return s;
}

double zero_rate_distortion(const ProbVector& mu, const DistortionMatrix& rho) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t y = 0; y < rho.cols(); ++y) {
    double d = 0.0;
    for (std::size_t x = 0; x < rho.rows(); ++x) d += mu[x] * rho(x, y);
    best = std::min(best, d);
  }
  return best;
}

ClassicalSolution ba_fixed_point(const ProbVector& mu, const DistortionMatrix& rho,
                                 double s, const ProbVector& init_output, double tol,
                                 int max_iter) {
  if (mu.size() != rho.rows()) throw DimensionMismatch("ba_fixed_point: source size");
  if (init_output.size() != rho.cols())
    throw DimensionMismatch("ba_fixed_point: output size");
  for (std::size_t y = 0; y < init_output.size(); ++y)
    if (init_output[y] <= 0.0)
      throw NonPositiveInit("initial output marginal must be strictly positive");
  if (s > 0.0) throw Error("slope must be nonpositive");

  std::size_t m = rho.rows(), n = rho.cols();
  std::vector<double> nu(init_output.probs().begin(), init_output.probs().end());
  std::vector<double> logz, next(n);
  int it = 0;
  bool converged = false;
  for (; it < max_iter; ++it) {
    row_log_partition(rho, s, nu, logz);
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t x = 0; x < m; ++x) {
      if (mu[x] == 0.0) continue;
      for (std::size_t y = 0; y < n; ++y) {
        if (nu[y] == 0.0) continue;
        next[y] += mu[x] * std::exp(s * rho(x, y) + std::log(nu[y]) - logz[x]);
      }
    }
    double delta = 0.0;
    for (std::size_t y = 0; y < n; ++y) delta = std::max(delta, std::abs(next[y] - nu[y]));
    nu = next;
    if (delta < tol) {
      converged = true;
      ++it;
      break;
    }
  }

  row_log_partition(rho, s, nu, logz);
  ClassicalSolution sol;
  sol.slope = s;
  sol.kernel = tilted_kernel(rho, s, nu, logz);
  sol.output = induced_output(mu, sol.kernel);
  sol.rate = mutual_information(mu, sol.kernel);
  sol.distortion = expected_distortion(mu, sol.kernel, rho);
  sol.iterations = it;
  sol.converged = converged;
  return sol;
}

CurvePoint rate_at_slope(const ProbVector& mu, const DistortionMatrix& rho, double s,
                         double tol) {
  ClassicalSolution sol =
      ba_fixed_point(mu, rho, s, ProbVector::uniform(rho.cols()), tol);
  std::vector<double> logz;
  row_log_partition(rho, s, sol.output.probs(), logz);
  double parametric = s * sol.distortion;
  for (std::size_t x = 0; x < mu.size(); ++x)
    if (mu[x] > 0.0) parametric -= mu[x] * logz[x];
  CurvePoint pt;
  pt.distortion = sol.distortion;
  pt.rate = std::max(0.0, parametric);
  pt.slope = s;
  pt.lambda = 0.0;
  pt.kl = 0.0;
  pt.worst_distortion = sol.distortion;
  pt.converged = sol.converged;
  return pt;
}

ClassicalSolution classical_rd(const ProbVector& mu, const DistortionMatrix& rho,
                               double budget, double tol, double ba_tol,
                               int max_iter) {
  if (mu.size() != rho.rows()) throw DimensionMismatch("classical_rd: source size");
  if (budget < 0.0) throw Error("budget must be nonnegative");
  double dmin = min_distortion(mu, rho);
  if (budget < dmin - 1e-12)
    throw InfeasibleBudget("budget below the minimum achievable distortion");
  if (budget >= zero_rate_distortion(mu, rho)) return degenerate_zero_rate(mu, rho);

  const ProbVector init = ProbVector::uniform(rho.cols());
  auto eval = [&](double s) { return ba_fixed_point(mu, rho, s, init, ba_tol, max_iter); };

  // Distortion is nondecreasing in s; find a left endpoint below the budget.
  double s_lo = -1.0, s_hi = 0.0;
  ClassicalSolution best;
  bool have_best = false;
  for (int k = 0; k < 200; ++k) {
    ClassicalSolution sol = eval(s_lo);
    if (std::abs(sol.distortion - budget) <= tol) return sol;
    if (sol.distortion < budget) {
      best = sol;
      have_best = true;
      break;
    }
    s_hi = s_lo;
    s_lo *= 2.0;
    if (s_lo < -1e18) break;
  }
  if (!have_best) {
    // Budget sits at the minimum-distortion floor; return the deepest solve.
    ClassicalSolution sol = eval(s_lo);
    sol.converged = sol.converged && std::abs(sol.distortion - budget) <= 10 * tol;
    return sol;
  }

  for (int k = 0; k < 200; ++k) {
    double s_mid = 0.5 * (s_lo + s_hi);
    ClassicalSolution sol = eval(s_mid);
    if (std::abs(sol.distortion - budget) <= tol) return sol;
    if (sol.distortion < budget) {
      s_lo = s_mid;
      best = sol;
    } else {
      s_hi = s_mid;
    }
    if (s_hi - s_lo < 1e-16 * std::max(1.0, std::abs(s_lo))) break;
  }
  best.converged = false;  // distortion not matched within tol
  return best;
}

std::vector<CurvePoint> rd_curve(const ProbVector& mu, const DistortionMatrix& rho,
                                 std::span<const double> slopes, double tol,
                                 int threads) {
  for (double s : slopes)
    if (s > 0.0) throw Error("slopes must be nonpositive");
  std::vector<CurvePoint> pts(slopes.size());
  parallel_for(slopes.size(), threads,
               [&](std::size_t i) { pts[i] = rate_at_slope(mu, rho, slopes[i], tol); });
  std::sort(pts.begin(), pts.end(),
            [](const CurvePoint& a, const CurvePoint& b) {
              return a.distortion < b.distortion;
            });
  return pts;
}

}  // namespace rrd
