#include "rrd/robust.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "rrd/entropy_ball.hpp"
#include "rrd/errors.hpp"
#include "rrd/logsum.hpp"
#include "rrd/oracle.hpp"
#include "rrd/parallel.hpp"
#include "rrd/rng.hpp"

namespace rrd {

namespace {

constexpr double kTempMin = 1e-8;
constexpr double kTempMax = 1e8;
constexpr double kInf = std::numeric_limits<double>::infinity();

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

// State of one inner fixed point at fixed (s, temperature).
struct Inner {
  ProbVector mu_star;
  ProbVector nu;  // fixed-point marginal the tilts are built from
  Kernel q;
  std::vector<double> ell;
  double distortion = 0.0;
  double kl = 0.0;
  double mi = 0.0;
  int sweeps = 0;
  bool converged = false;
};

// mu*(x) ~ e^{ell(x)/tau} mu(x), log-domain.
ProbVector source_tilt(std::span<const double> ell, const ProbVector& mu, double tau) {
  std::vector<double> logw(ell.size(), kNegInf);
  double m = kNegInf;
  for (std::size_t x = 0; x < ell.size(); ++x) {
    if (mu[x] == 0.0) continue;
    logw[x] = ell[x] / tau + std::log(mu[x]);
    m = std::max(m, logw[x]);
  }
  std::vector<double> p(ell.size(), 0.0);
  double z = 0.0;
  for (std::size_t x = 0; x < ell.size(); ++x) {
    if (logw[x] == kNegInf) continue;
    p[x] = std::exp(logw[x] - m);
    z += p[x];
  }
  for (double& v : p) v /= z;
  return ProbVector(std::move(p));
}

class SaddleEngine {
 public:
  SaddleEngine(const ProblemInstance& inst, const RobustOptions& opts,
               bool kernel_route)
      : inst_(inst), opts_(opts), kernel_route_(kernel_route) {}

  Inner run_inner(double s, double tau) const {
    const DistortionMatrix& rho = inst_.rho;
    const ProbVector& mu = inst_.nominal;
    std::size_t m = rho.rows(), n = rho.cols();

    std::vector<double> nu;
    if (kernel_route_) {
      // Column masses of the tilt give a distinct deterministic start,
      // exercising fixed-point uniqueness against the marginal route.
      nu.assign(n, 0.0);
      double z = 0.0;
      for (std::size_t y = 0; y < n; ++y) {
        for (std::size_t x = 0; x < m; ++x) nu[y] += mu[x] * std::exp(s * rho(x, y));
        z += nu[y];
      }
      for (double& v : nu) v /= z;
    } else {
      nu.assign(n, 1.0 / static_cast<double>(n));
    }

    std::vector<double> logz, ell(m), next(n), lnu(n);
    std::array<double, 11> window{};
    int filled = 0;
    bool damped = false;
    Inner res;
    for (int sweep = 0; sweep < opts_.max_inner; ++sweep) {
      row_log_partition(rho, s, nu, logz);
      for (std::size_t y = 0; y < n; ++y)
        lnu[y] = (nu[y] > 0.0) ? std::log(nu[y]) : kNegInf;
      if (kernel_route_) {
        for (std::size_t x = 0; x < m; ++x) {
          double acc = 0.0;
          for (std::size_t y = 0; y < n; ++y) {
            if (nu[y] == 0.0) continue;
            double lq = s * rho(x, y) + lnu[y] - logz[x];
            acc += std::exp(lq) * (lq - lnu[y] - s * rho(x, y));
          }
          ell[x] = acc;
        }
      } else {
        for (std::size_t x = 0; x < m; ++x) ell[x] = -logz[x];
      }
      ProbVector mu_star = source_tilt(ell, mu, tau);
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t x = 0; x < m; ++x) {
        if (mu_star[x] == 0.0) continue;
        for (std::size_t y = 0; y < n; ++y) {
          if (nu[y] == 0.0) continue;
          next[y] += mu_star[x] * std::exp(s * rho(x, y) + lnu[y] - logz[x]);
        }
      }
      double delta = 0.0;
      for (std::size_t y = 0; y < n; ++y)
        delta = std::max(delta, std::abs(next[y] - nu[y]));

      if (!damped) {
        if (filled < 11) {
          window[filled++] = delta;
        } else {
          std::rotate(window.begin(), window.begin() + 1, window.end());
          window[10] = delta;
        }
        if (filled == 11)
          for (int i = 1; i < 11; ++i)
            if (window[i] > window[i - 1]) {
              damped = true;
              break;
            }
      }
      if (damped)
        for (std::size_t y = 0; y < n; ++y) nu[y] = 0.5 * (nu[y] + next[y]);
      else
        nu = next;
      res.sweeps = sweep + 1;
      if (delta < opts_.inner_tol) {
        res.converged = true;
        break;
      }
    }

    row_log_partition(rho, s, nu, logz);
    Kernel q(m, n);
    for (std::size_t x = 0; x < m; ++x)
      for (std::size_t y = 0; y < n; ++y)
        q(x, y) = (nu[y] > 0.0)
                      ? std::exp(s * rho(x, y) + std::log(nu[y]) - logz[x])
                      : 0.0;
    for (std::size_t x = 0; x < m; ++x) ell[x] = -logz[x];
    res.ell = ell;
    res.mu_star = source_tilt(ell, mu, tau);
    res.nu = ProbVector(std::move(nu));
    res.q = std::move(q);
    res.distortion = expected_distortion(res.mu_star, res.q, rho);
    res.kl = kl_divergence(res.mu_star, mu);
    res.mi = mutual_information(res.mu_star, res.q);
    return res;
  }

  struct SPoint {
    double s = 0.0;
    Inner inner;
    bool matched = false;
  };

  // Slope bisection at fixed temperature: distortion is nondecreasing in s.
  SPoint solve_s(double tau) const {
    double target = inst_.budget;
    auto eval = [&](double s) { return run_inner(s, tau); };

    SPoint best;
    double s_lo = -1.0, s_hi = 0.0;
    bool bracketed = false;
    for (int k = 0; k < 64; ++k) {
      Inner in = eval(s_lo);
      if (std::abs(in.distortion - target) <= opts_.s_tol) {
        best = {s_lo, std::move(in), true};
        return best;
      }
      if (in.distortion < target) {
        best = {s_lo, std::move(in), false};
        bracketed = true;
        break;
      }
      s_hi = s_lo;
      s_lo *= 2.0;
      if (s_lo < -1e15) break;
    }
    if (!bracketed) {
      Inner in = eval(s_lo);
      bool ok = std::abs(in.distortion - target) <= 100 * opts_.s_tol;
      best = {s_lo, std::move(in), ok};
      return best;
    }
    for (int k = 0; k < 90; ++k) {
      double mid = 0.5 * (s_lo + s_hi);
      Inner in = eval(mid);
      if (std::abs(in.distortion - target) <= opts_.s_tol) {
        best = {mid, std::move(in), true};
        return best;
      }
      if (in.distortion < target) {
        s_lo = mid;
        best = {mid, std::move(in), false};
      } else {
        s_hi = mid;
      }
      if (s_hi - s_lo < 1e-16 * std::max(1.0, -s_lo)) break;
    }
    return best;
  }

  RobustSolution solve() const {
    inst_.validate();
    const ProbVector& mu = inst_.nominal;
    const DistortionMatrix& rho = inst_.rho;
    std::size_t m = rho.rows(), n = rho.cols();

    if (inst_.radius == 0.0) return classical_reduction();

    // Feasibility: the worst source in the ball must still admit the budget.
    std::vector<double> floor_cost(m);
    for (std::size_t x = 0; x < m; ++x) floor_cost[x] = rho.row_min(x);
    TiltResult wc_floor = worstcase_expectation(floor_cost, mu, inst_.radius);
    if (inst_.budget < wc_floor.value - 1e-12)
      throw InfeasibleBudget("budget below the worst-case minimum distortion");

    // Zero-rate regime: a single reproduction point already meets the budget
    // for every source in the ball.
    double dmax_rob = kInf;
    std::size_t best_y = 0;
    for (std::size_t y = 0; y < n; ++y) {
      double v = worstcase_expectation(rho.column(y), mu, inst_.radius).value;
      if (v < dmax_rob) {
        dmax_rob = v;
        best_y = y;
      }
    }
    if (inst_.budget >= dmax_rob) return degenerate_budget(best_y);

    SPoint hi = solve_s(kTempMax);
    if (hi.inner.kl > inst_.radius) {
      // Radius below the weakest representable tilt: numerically classical.
      return assemble(hi, kTempMax, true);
    }
    SPoint lo = solve_s(kTempMin);
    if (lo.inner.kl < inst_.radius) {
      // Ball swallows the zero-temperature worst case; multiplier is zero.
      return assemble(lo, 0.0, false);
    }

    double t_lo = kTempMin, t_hi = kTempMax;
    SPoint sp = std::move(hi);
    double tau = kTempMax;
    for (int k = 0; k < 90; ++k) {
      tau = std::sqrt(t_lo * t_hi);
      sp = solve_s(tau);
      if (std::abs(sp.inner.kl - inst_.radius) <= opts_.lambda_tol) break;
      if (sp.inner.kl > inst_.radius)
        t_lo = tau;
      else
        t_hi = tau;
      if (t_hi / t_lo < 1.0 + 1e-15) break;
    }
    return assemble(sp, tau, true);
  }

 private:
  RobustSolution classical_reduction() const {
    ClassicalSolution cs = classical_rd(inst_.nominal, inst_.rho, inst_.budget,
                                        opts_.s_tol, opts_.inner_tol, opts_.max_inner);
    RobustSolution r;
    r.slope = cs.slope;
    r.lambda = kInf;
    r.worst_source = inst_.nominal;
    r.output = cs.output;
    r.kernel = cs.kernel;
    r.rate = cs.rate;
    r.achieved_distortion = cs.distortion;
    r.achieved_kl = 0.0;
    r.worst_distortion = cs.distortion;
    r.kl_constraint_active = true;
    r.converged = cs.converged;
    r.lemma2_radius = lemma2_radius(r, inst_);
    return r;
  }

  RobustSolution degenerate_budget(std::size_t y) const {
    TiltResult wc = worstcase_expectation(inst_.rho.column(y), inst_.nominal,
                                          inst_.radius);
    RobustSolution r;
    r.slope = 0.0;
    r.lambda = 0.0;
    r.worst_source = wc.maximizer;
    r.output = ProbVector::point_mass(inst_.rho.cols(), y);
    r.kernel = Kernel::constant_rows(inst_.rho.rows(), r.output);
    r.rate = 0.0;
    r.achieved_distortion = wc.value;
    r.achieved_kl = wc.achieved_kl;
    r.worst_distortion = wc.value;
    r.kl_constraint_active = wc.constraint_active;
    r.converged = true;
    r.lemma2_radius = lemma2_radius(r, inst_);
    return r;
  }

  RobustSolution assemble(const SPoint& sp, double tau, bool active) const {
    RobustSolution r;
    r.slope = sp.s;
    if (tau == 0.0)
      r.lambda = 0.0;
    else if (opts_.variant == ExponentVariant::literal_lambda)
      r.lambda = 1.0 / tau;
    else
      r.lambda = tau;
    r.worst_source = sp.inner.mu_star;
    r.kernel = sp.inner.q;
    r.output = induced_output(r.worst_source, r.kernel);
    r.achieved_distortion = sp.inner.distortion;
    r.achieved_kl = sp.inner.kl;
    r.kl_constraint_active = active;
    double value = robust_rate_value(sp.s, r.lambda, sp.inner.nu, inst_);
    r.rate = (opts_.variant == ExponentVariant::inverse_lambda)
                 ? std::max(0.0, value)
                 : value;

    std::vector<double> row_cost(inst_.rho.rows(), 0.0);
    for (std::size_t x = 0; x < inst_.rho.rows(); ++x)
      for (std::size_t y = 0; y < inst_.rho.cols(); ++y)
        row_cost[x] += r.kernel(x, y) * inst_.rho(x, y);
    r.worst_distortion =
        worstcase_expectation(row_cost, inst_.nominal, inst_.radius).value;

    bool kl_ok = !active ||
                 std::abs(sp.inner.kl - inst_.radius) <= 100 * opts_.lambda_tol;
    r.converged = sp.inner.converged && sp.matched && kl_ok;
    r.lemma2_radius = lemma2_radius(r, inst_);
    return r;
  }

  const ProblemInstance& inst_;
  RobustOptions opts_;
  bool kernel_route_;
};

RobustOptions from_simple(double tol, int max_iter) {
  RobustOptions o;
  o.s_tol = tol;
  o.lambda_tol = tol;
  o.inner_tol = std::min(1e-10, 0.1 * tol);
  o.max_inner = max_iter;
  return o;
}

}  // namespace

double robust_rate_value(double s, double lambda, const ProbVector& output,
                         const ProblemInstance& instance) {
  if (lambda < 0.0) throw LambdaNonPositive("lambda must be nonnegative");
  const DistortionMatrix& rho = instance.rho;
  const ProbVector& mu = instance.nominal;
  std::vector<double> logz;
  row_log_partition(rho, s, output.probs(), logz);
  std::vector<double> ell(logz.size());
  for (std::size_t x = 0; x < logz.size(); ++x) ell[x] = -logz[x];

  double base = s * instance.budget;
  if (lambda == 0.0) {
    double best = kNegInf;
    for (std::size_t x = 0; x < ell.size(); ++x)
      if (mu[x] > 0.0) best = std::max(best, ell[x]);
    return base + best;
  }
  if (std::isinf(lambda)) {
    double lin = 0.0;
    for (std::size_t x = 0; x < ell.size(); ++x)
      if (mu[x] > 0.0) lin += mu[x] * ell[x];
    return base + (instance.radius > 0.0 ? kInf : 0.0) + lin;
  }
  return base + lambda * instance.radius + free_energy(ell, mu, lambda);
}

RobustSolution maxmin_solve(const ProblemInstance& instance,
                            const RobustOptions& opts) {
  return SaddleEngine(instance, opts, /*kernel_route=*/false).solve();
}

RobustSolution maxmin_solve(const ProblemInstance& instance, double tol,
                            int max_iter) {
  return maxmin_solve(instance, from_simple(tol, max_iter));
}

RobustSolution minimax_solve(const ProblemInstance& instance,
                             const RobustOptions& opts) {
  return SaddleEngine(instance, opts, /*kernel_route=*/true).solve();
}

RobustSolution minimax_solve(const ProblemInstance& instance, double tol,
                             int max_iter) {
  return minimax_solve(instance, from_simple(tol, max_iter));
}

Lemma2Report lemma2_report(const RobustSolution& solution,
                           const ProblemInstance& instance, double tol) {
  const ProbVector& mu = instance.nominal;
  const ProbVector& ms = solution.worst_source;
  Lemma2Report rep;

  if (instance.radius == 0.0) {
    rep.rstar = 0.0;
    rep.alpha = kInf;
    rep.maximizer = mu;
    rep.attained = true;
    return rep;
  }

  // H(mu'||mu*) = H(mu'||mu) + sum mu' ln(mu/mu*); the worst-case of the
  // second term over the ball is a tilted linear functional, so the bound is
  // exact for the reported mu* and tight at the tilted extremal.
  std::vector<double> v(mu.size(), 0.0);
  for (std::size_t x = 0; x < mu.size(); ++x) {
    if (mu[x] == 0.0) continue;
    if (ms[x] == 0.0) {
      rep.rstar = kInf;
      rep.alpha = 0.0;
      rep.maximizer = mu;
      rep.attained = false;
      return rep;
    }
    v[x] = std::log(mu[x] / ms[x]);
  }
  TiltResult wc = worstcase_expectation(v, mu, instance.radius, tol);
  rep.rstar = instance.radius + wc.value;
  rep.alpha = wc.multiplier;
  rep.maximizer = wc.maximizer;
  rep.attained = wc.constraint_active;
  return rep;
}

double lemma2_radius(const RobustSolution& solution, const ProblemInstance& instance,
                     double tol) {
  return lemma2_report(solution, instance, tol).rstar;
}

SaddleReport saddle_check(const RobustSolution& solution,
                          const ProblemInstance& instance, int samples, double tol,
                          std::uint64_t seed) {
  SaddleReport rep;
  rep.samples = samples;

  std::vector<ProbVector> sources;
  sources.reserve(static_cast<std::size_t>(samples));
  sources.push_back(solution.worst_source);
  if (samples > 1) {
    auto ball = sample_ball(instance.nominal, instance.radius, samples - 1, seed);
    for (auto& b : ball) sources.push_back(std::move(b));
  }

  // (a) no source in the ball beats the saddle rate against q*.
  for (const auto& src : sources) {
    double gap = mutual_information(src, solution.kernel) - solution.rate;
    rep.max_source_gap = std::max(rep.max_source_gap, gap);
    if (gap > tol) ++rep.source_violations;
  }

  // (b) no feasible kernel goes below the saddle rate against mu*. Mixtures
  // toward the min-distortion deterministic kernel stay within the budget.
  Kernel det(instance.rho.rows(), instance.rho.cols());
  for (std::size_t x = 0; x < instance.rho.rows(); ++x) {
    std::size_t best = 0;
    for (std::size_t y = 1; y < instance.rho.cols(); ++y)
      if (instance.rho(x, y) < instance.rho(x, best)) best = y;
    det(x, best) = 1.0;
  }
  Rng rng(mix_seed(seed, 0x6b65726eULL));
  rep.min_kernel_gap = kInf;
  for (int i = 0; i < samples; ++i) {
    double t = (i == 0) ? 0.0 : rng.uniform();
    Kernel q(instance.rho.rows(), instance.rho.cols());
    for (std::size_t x = 0; x < q.rows(); ++x)
      for (std::size_t y = 0; y < q.cols(); ++y)
        q(x, y) = (1.0 - t) * solution.kernel(x, y) + t * det(x, y);
    double gap = mutual_information(solution.worst_source, q) - solution.rate;
    rep.min_kernel_gap = std::min(rep.min_kernel_gap, gap);
    if (gap < -tol) ++rep.kernel_violations;
  }

  // (c) classical rates over the ball never exceed the robust rate.
  std::vector<double> rates(sources.size());
  parallel_for(sources.size(), 0, [&](std::size_t i) {
    rates[i] =
        classical_rd(sources[i], instance.rho, instance.budget).rate;
  });
  for (double rv : rates) {
    double gap = rv - solution.rate;
    rep.max_classical_gap = std::max(rep.max_classical_gap, gap);
    if (gap > tol) ++rep.classical_violations;
  }
  return rep;
}

std::vector<CurvePoint> robust_curve(const ProblemInstance& instance,
                                     std::span<const double> budgets,
                                     const RobustOptions& opts, int threads) {
  std::vector<CurvePoint> pts(budgets.size());
  parallel_for(budgets.size(), threads, [&](std::size_t i) {
    ProblemInstance one = instance;
    one.budget = budgets[i];
    RobustSolution sol = maxmin_solve(one, opts);
    pts[i] = {sol.achieved_distortion, sol.rate,        sol.slope,
              sol.lambda,              sol.achieved_kl,  sol.worst_distortion,
              sol.converged};
    if (!std::isfinite(pts[i].lambda)) pts[i].lambda = 0.0;
  });
  std::sort(pts.begin(), pts.end(), [](const CurvePoint& a, const CurvePoint& b) {
    return a.distortion < b.distortion;
  });
  return pts;
}

}  // namespace rrd
