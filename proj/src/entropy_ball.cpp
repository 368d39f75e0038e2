#include "rrd/entropy_ball.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "rrd/errors.hpp"
#include "rrd/logsum.hpp"

namespace rrd {

namespace {

constexpr double kAlphaMin = 1e-8;
constexpr double kAlphaMax = 1e8;
constexpr double kInf = std::numeric_limits<double>::infinity();

double dot(std::span<const double> ell, const ProbVector& mu) {
  double s = 0.0;
  for (std::size_t i = 0; i < ell.size(); ++i) s += ell[i] * mu[i];
  return s;
}

void require_finite(std::span<const double> ell, const ProbVector& mu) {
  if (ell.size() != mu.size())
    throw DimensionMismatch("functional length does not match distribution");
  if (!check_bounded_below(ell)) throw Error("functional must be finite-valued");
}

}  // namespace

bool check_bounded_below(std::span<const double> ell) {
  for (double v : ell)
    if (!std::isfinite(v)) return false;
  return !ell.empty();
}

ProbVector tilted_distribution(std::span<const double> ell, const ProbVector& mu,
                               double scale) {
  if (scale <= 0.0) throw ScaleNonPositive("tilt scale must be positive");
  require_finite(ell, mu);
  std::vector<double> logw(ell.size(), kNegInf);
  double m = kNegInf;
  for (std::size_t i = 0; i < ell.size(); ++i) {
    if (mu[i] == 0.0) continue;
    logw[i] = ell[i] / scale + std::log(mu[i]);
    if (logw[i] > m) m = logw[i];
  }
  std::vector<double> p(ell.size(), 0.0);
  double z = 0.0;
  for (std::size_t i = 0; i < ell.size(); ++i) {
    if (logw[i] == kNegInf) continue;
    p[i] = std::exp(logw[i] - m);
    z += p[i];
  }
  for (double& v : p) v /= z;
  return ProbVector(std::move(p));
}

ProbVector zero_temperature_tilt(std::span<const double> ell, const ProbVector& mu) {
  require_finite(ell, mu);
  double best = kNegInf;
  for (std::size_t i = 0; i < ell.size(); ++i)
    if (mu[i] > 0.0 && ell[i] > best) best = ell[i];
  std::vector<double> p(ell.size(), 0.0);
  double z = 0.0;
  for (std::size_t i = 0; i < ell.size(); ++i) {
    if (mu[i] > 0.0 && ell[i] == best) {
      p[i] = mu[i];
      z += mu[i];
    }
  }
  for (double& v : p) v /= z;
  return ProbVector(std::move(p));
}

double free_energy(std::span<const double> ell, const ProbVector& mu, double scale) {
  if (scale <= 0.0) throw ScaleNonPositive("free-energy scale must be positive");
  require_finite(ell, mu);
  std::vector<double> a(ell.size());
  for (std::size_t i = 0; i < ell.size(); ++i) a[i] = ell[i] / scale;
  return scale * log_dot_exp(a, mu.probs());
}

TiltResult worstcase_expectation(std::span<const double> ell, const ProbVector& mu,
                                 double radius, double tol) {
  require_finite(ell, mu);
  if (radius < 0.0) throw Error("radius must be nonnegative");

  TiltResult r;
  if (radius == 0.0) {
    r.value = dot(ell, mu);
    r.multiplier = kInf;
    r.maximizer = mu;
    r.achieved_kl = 0.0;
    r.constraint_active = true;
    return r;
  }

  // KL of the zero-temperature limit; if the ball already contains it the
  // constraint cannot bind.
  ProbVector zt = zero_temperature_tilt(ell, mu);
  double kl_zt = kl_divergence(zt, mu);
  if (radius >= kl_zt) {
    double best = kNegInf;
    for (std::size_t i = 0; i < ell.size(); ++i)
      if (mu[i] > 0.0 && ell[i] > best) best = ell[i];
    r.value = best;
    r.multiplier = 0.0;
    r.maximizer = zt;
    r.achieved_kl = kl_zt;
    r.constraint_active = false;
    return r;
  }

  auto kl_at = [&](double alpha) {
    return kl_divergence(tilted_distribution(ell, mu, alpha), mu);
  };

  double lo = kAlphaMin, hi = kAlphaMax;
  if (kl_at(hi) > radius) {
    // Radius smaller than the weakest representable tilt; the ball is
    // numerically the singleton {mu}.
    r.value = dot(ell, mu);
    r.multiplier = hi;
    r.maximizer = mu;
    r.achieved_kl = 0.0;
    r.constraint_active = false;
    return r;
  }
  double alpha = hi;
  for (int it = 0; it < 200; ++it) {
    alpha = std::sqrt(lo * hi);
    double kl = kl_at(alpha);
    if (std::abs(kl - radius) <= tol) break;
    if (kl > radius)
      lo = alpha;
    else
      hi = alpha;
    if (hi / lo < 1.0 + 1e-15) break;
  }
  r.maximizer = tilted_distribution(ell, mu, alpha);
  r.achieved_kl = kl_divergence(r.maximizer, mu);
  r.multiplier = alpha;
  r.value = alpha * radius + free_energy(ell, mu, alpha);
  r.constraint_active = true;
  return r;
}

}  // namespace rrd
