#include "rrd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "rrd/classical.hpp"
#include "rrd/entropy_ball.hpp"
#include "rrd/errors.hpp"
#include "rrd/logsum.hpp"
#include "rrd/parallel.hpp"
#include "rrd/rng.hpp"

namespace rrd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void lattice_recurse(std::size_t dim, std::size_t K, std::size_t coord,
                     std::size_t left, std::vector<std::size_t>& counts,
                     std::span<const double> lo, std::span<const double> hi,
                     std::vector<ProbVector>& out) {
  if (coord + 1 == dim) {
    double v = static_cast<double>(left) / static_cast<double>(K);
    if (v < lo[coord] || v > hi[coord]) return;
    counts[coord] = left;
    std::vector<double> p(dim);
    for (std::size_t i = 0; i < dim; ++i)
      p[i] = static_cast<double>(counts[i]) / static_cast<double>(K);
    out.emplace_back(std::move(p));
    return;
  }
  for (std::size_t k = 0; k <= left; ++k) {
    double v = static_cast<double>(k) / static_cast<double>(K);
    if (v > hi[coord]) break;
    if (v < lo[coord]) continue;
    counts[coord] = k;
    lattice_recurse(dim, K, coord + 1, left - k, counts, lo, hi, out);
  }
}

std::vector<ProbVector> bounded_lattice(std::size_t dim, std::size_t K,
                                        std::span<const double> lo,
                                        std::span<const double> hi) {
  std::vector<ProbVector> out;
  std::vector<std::size_t> counts(dim, 0);
  lattice_recurse(dim, K, 0, K, counts, lo, hi, out);
  return out;
}

bool lex_less(const ProbVector& a, const ProbVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

// Evaluates f over the candidates (slot-parallel) and reduces serially so
// serial and parallel runs agree bit-for-bit; ties prefer the
// lexicographically smallest point.
void grid_max(const std::vector<ProbVector>& candidates,
              const std::function<double(const ProbVector&)>& f, int threads,
              double& best, ProbVector& argmax) {
  std::vector<double> vals(candidates.size());
  parallel_for(candidates.size(), threads,
               [&](std::size_t i) { vals[i] = f(candidates[i]); });
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (vals[i] > best ||
        (vals[i] == best && argmax.size() && lex_less(candidates[i], argmax))) {
      best = vals[i];
      argmax = candidates[i];
    }
  }
}

BruteForceResult refine_search(std::size_t dim, double radius, const ProbVector& mu,
                               const GridSpec& grid,
                               const std::function<double(const ProbVector&)>& f,
                               int threads) {
  if (dim > static_cast<std::size_t>(grid.max_dim))
    throw AlphabetTooLarge("alphabet exceeds the grid enumeration limit");
  if (!(grid.step > 0.0 && grid.step < 1.0)) throw Error("grid step must be in (0,1)");

  auto in_ball = [&](const ProbVector& p) {
    return kl_divergence(p, mu) <= radius;
  };

  std::size_t K = std::max<std::size_t>(1, std::llround(1.0 / grid.step));
  std::vector<double> lo(dim, 0.0), hi(dim, 1.0);
  std::vector<ProbVector> cand;
  for (auto& p : simplex_lattice(dim, K))
    if (in_ball(p)) cand.push_back(std::move(p));
  cand.push_back(mu);  // the nominal is always a member

  double best = -kInf;
  ProbVector argmax;
  grid_max(cand, f, threads, best, argmax);

  double step = 1.0 / static_cast<double>(K);
  for (int round = 0; round < grid.refine_rounds; ++round) {
    double prev = step;
    K *= 2;
    step = 1.0 / static_cast<double>(K);
    for (std::size_t i = 0; i < dim; ++i) {
      lo[i] = std::max(0.0, argmax[i] - 2.0 * prev);
      hi[i] = std::min(1.0, argmax[i] + 2.0 * prev);
    }
    std::vector<ProbVector> local;
    for (auto& p : bounded_lattice(dim, K, lo, hi))
      if (in_ball(p)) local.push_back(std::move(p));
    grid_max(local, f, threads, best, argmax);
  }

  BruteForceResult res;
  res.value = best;
  res.argmax = argmax;
  res.final_step = step;
  return res;
}

}  // namespace

std::vector<ProbVector> simplex_lattice(std::size_t dim, std::size_t K) {
  std::vector<double> lo(dim, 0.0), hi(dim, 1.0);
  return bounded_lattice(dim, K, lo, hi);
}

BruteForceResult brute_force_robust(const ProblemInstance& instance,
                                    const GridSpec& grid, double tol, int threads) {
  instance.validate();
  auto rate_of = [&](const ProbVector& src) {
    return classical_rd(src, instance.rho, instance.budget, tol).rate;
  };
  BruteForceResult res = refine_search(instance.source_size, instance.radius,
                                       instance.nominal, grid, rate_of, threads);

  // Central-difference gradient probe along simplex tangent directions near
  // the argmax, for the discretization slack.
  const double h = 1e-6;
  double lips = 0.0;
  for (std::size_t i = 0; i < instance.source_size; ++i) {
    for (std::size_t j = i + 1; j < instance.source_size; ++j) {
      if (res.argmax[i] < h || res.argmax[j] < h || res.argmax[i] > 1.0 - h ||
          res.argmax[j] > 1.0 - h)
        continue;
      std::vector<double> up(res.argmax.probs().begin(), res.argmax.probs().end());
      std::vector<double> dn = up;
      up[i] += h;
      up[j] -= h;
      dn[i] -= h;
      dn[j] += h;
      double g = (rate_of(ProbVector(up)) - rate_of(ProbVector(dn))) / (2.0 * h);
      lips = std::max(lips, std::abs(g));
    }
  }
  res.lipschitz = lips;
  return res;
}

BruteForceResult brute_force_worstcase(std::span<const double> ell,
                                       const ProbVector& mu, double radius,
                                       const GridSpec& grid, int threads) {
  if (ell.size() != mu.size())
    throw DimensionMismatch("functional length does not match distribution");
  auto lin = [&](const ProbVector& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += ell[i] * p[i];
    return s;
  };
  BruteForceResult res = refine_search(mu.size(), radius, mu, grid, lin, threads);
  double mn = kInf, mx = -kInf;
  for (double v : ell) {
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  res.lipschitz = mx - mn;  // exact gradient bound for a linear functional
  return res;
}

std::vector<ProbVector> sample_ball(const ProbVector& mu, double radius, int count,
                                    std::uint64_t seed) {
  std::vector<ProbVector> out;
  if (count <= 0) return out;
  out.reserve(static_cast<std::size_t>(count));
  if (radius <= 0.0) {
    out.assign(static_cast<std::size_t>(count), mu);
    return out;
  }

  out.push_back(mu);
  for (std::size_t x = 0; x < mu.size() && out.size() < static_cast<std::size_t>(count);
       ++x) {
    if (mu[x] == 0.0) continue;
    std::vector<double> e(mu.size(), 0.0);
    e[x] = 1.0;
    out.push_back(worstcase_expectation(e, mu, radius).maximizer);
  }

  auto kl_of_tilt = [&](std::span<const double> t, double c) {
    std::vector<double> ct(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) ct[i] = c * t[i];
    ProbVector p = tilted_distribution(ct, mu, 1.0);
    return std::make_pair(kl_divergence(p, mu), p);
  };

  for (int i = static_cast<int>(out.size()); i < count; ++i) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
    std::vector<double> t(mu.size());
    double sigma = std::exp(std::log(0.05) + rng.uniform() * std::log(5.0 / 0.05));
    for (double& v : t) v = sigma * rng.normal();

    double c = 1.0;
    auto [kl, p] = kl_of_tilt(t, c);
    if (i % 3 == 0) {
      // Project onto the ball boundary along the tilt path.
      double lo = 0.0, hi = c;
      if (kl <= radius) {
        for (int k = 0; k < 60 && kl <= radius; ++k) {
          lo = hi;
          hi *= 2.0;
          std::tie(kl, p) = kl_of_tilt(t, hi);
        }
      }
      if (kl > radius) {
        for (int k = 0; k < 200; ++k) {
          double mid = 0.5 * (lo + hi);
          auto [kmid, pmid] = kl_of_tilt(t, mid);
          if (kmid <= radius) {
            lo = mid;
            p = pmid;
            kl = kmid;
          } else {
            hi = mid;
          }
          if (hi - lo < 1e-14 * std::max(1.0, hi)) break;
        }
        if (kl > radius) std::tie(kl, p) = kl_of_tilt(t, lo);
      }
    } else {
      for (int k = 0; k < 200 && kl > radius; ++k) {
        c *= 0.5;
        std::tie(kl, p) = kl_of_tilt(t, c);
      }
    }
    if (kl > radius) p = mu;  // degenerate direction; fall back to the center
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace rrd
