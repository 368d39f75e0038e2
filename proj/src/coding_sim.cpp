#include "rrd/coding_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rrd/classical.hpp"
#include "rrd/errors.hpp"
#include "rrd/oracle.hpp"
#include "rrd/parallel.hpp"
#include "rrd/rng.hpp"

namespace rrd {

Codebook generate_codebook(const ProbVector& output_dist, std::size_t block_len,
                           double rate, std::uint64_t seed, std::size_t word_cap) {
  if (block_len < 1) throw Error("block length must be at least 1");
  if (rate < 0.0) throw Error("codebook rate must be nonnegative");
  double target = std::exp(static_cast<double>(block_len) * rate);
  if (!(target <= static_cast<double>(word_cap)))
    throw RateTooLargeForMemory("codebook would exceed the word cap");
  std::size_t words = static_cast<std::size_t>(std::ceil(target));
  if (words < 1) words = 1;

  std::vector<double> cdf = cumulative(output_dist.probs());
  Codebook cb;
  cb.block_len = block_len;
  cb.rate = rate;
  cb.symbols.resize(words * block_len);
  for (std::size_t w = 0; w < words; ++w) {
    Rng rng(mix_seed(seed, w));
    for (std::size_t i = 0; i < block_len; ++i)
      cb.symbols[w * block_len + i] = static_cast<std::uint32_t>(rng.categorical(cdf));
  }
  return cb;
}

EncodeResult encode_block(std::span<const std::uint32_t> block, const Codebook& cb,
                          const DistortionMatrix& rho) {
  if (block.size() != cb.block_len)
    throw DimensionMismatch("block length does not match the codebook");
  const double n = static_cast<double>(cb.block_len);
  EncodeResult best{0, std::numeric_limits<double>::infinity()};
  for (std::size_t w = 0; w < cb.count(); ++w) {
    std::span<const std::uint32_t> word = cb.word(w);
    double acc = 0.0;
    double bound = best.distortion * n;
    bool pruned = false;
    for (std::size_t i = 0; i < block.size(); ++i) {
      acc += rho(block[i], word[i]);
      if (acc >= bound) {
        pruned = true;
        break;
      }
    }
    if (!pruned && acc / n < best.distortion) best = {w, acc / n};
  }
  return best;
}

SimReport simulate_admissibility(const ProblemInstance& instance,
                                 const RobustSolution& solution,
                                 std::size_t block_len, double rate_margin,
                                 int trials, int source_samples, double epsilon,
                                 std::uint64_t seed, int threads) {
  double rate = solution.rate + rate_margin;
  if (rate < 0.0)
    throw Error("rate margin drives the codebook rate below zero");
  Codebook cb = generate_codebook(solution.output, block_len, rate,
                                  mix_seed(seed, 0xc0deULL));

  // One code for the whole class: mu* and mu lead, ball samples follow.
  std::vector<ProbVector> sources;
  sources.push_back(solution.worst_source);
  auto ball = sample_ball(instance.nominal, instance.radius,
                          std::max(1, source_samples - 1), mix_seed(seed, 0xba11ULL));
  for (auto& b : ball) sources.push_back(std::move(b));
  if (static_cast<int>(sources.size()) > source_samples)
    sources.resize(static_cast<std::size_t>(source_samples));

  const std::size_t S = sources.size();
  const std::size_t T = static_cast<std::size_t>(trials);
  std::vector<std::vector<double>> cdfs;
  cdfs.reserve(S);
  for (const auto& src : sources) cdfs.push_back(cumulative(src.probs()));

  std::vector<double> dist(S * T, 0.0);
  parallel_for(S * T, threads, [&](std::size_t idx) {
    std::size_t si = idx / T, ti = idx % T;
    Rng rng(mix_seed(seed, si + 1, ti));
    std::vector<std::uint32_t> block(block_len);
    for (std::size_t i = 0; i < block_len; ++i)
      block[i] = static_cast<std::uint32_t>(rng.categorical(cdfs[si]));
    dist[idx] = encode_block(block, cb, instance.rho).distortion;
  });

  SimReport rep;
  rep.trials = trials;
  rep.seed = seed;
  rep.codebook_words = cb.count();
  rep.codebook_rate = rate;
  rep.block_len = block_len;
  rep.worst_mean = 0.0;
  double limit = instance.budget + epsilon;
  for (std::size_t si = 0; si < S; ++si) {
    double sum = 0.0;
    std::size_t over = 0;
    for (std::size_t ti = 0; ti < T; ++ti) {
      double d = dist[si * T + ti];
      sum += d;
      if (d > limit) ++over;
    }
    double mean = sum / static_cast<double>(T);
    double var = 0.0;
    for (std::size_t ti = 0; ti < T; ++ti) {
      double d = dist[si * T + ti] - mean;
      var += d * d;
    }
    var = (T > 1) ? var / static_cast<double>(T - 1) : 0.0;
    PerSourceStats st;
    st.source = sources[si];
    st.mean_distortion = mean;
    st.std_err = std::sqrt(var / static_cast<double>(T));
    st.exceed_frac = static_cast<double>(over) / static_cast<double>(T);
    rep.worst_mean = std::max(rep.worst_mean, mean);
    rep.per_source.push_back(std::move(st));
  }
  return rep;
}

ConverseReport converse_audit(const ProblemInstance& instance,
                              const RobustSolution& solution, int source_samples,
                              double tol, std::uint64_t seed, int threads) {
  std::vector<ProbVector> sources;
  sources.push_back(solution.worst_source);
  auto ball = sample_ball(instance.nominal, instance.radius,
                          std::max(1, source_samples - 1), seed);
  for (auto& b : ball) sources.push_back(std::move(b));

  std::vector<double> rates(sources.size());
  parallel_for(sources.size(), threads, [&](std::size_t i) {
    rates[i] = classical_rd(sources[i], instance.rho, instance.budget).rate;
  });

  ConverseReport rep;
  rep.samples = static_cast<int>(sources.size());
  rep.supremum = 0.0;
  for (double r : rates) {
    rep.supremum = std::max(rep.supremum, r);
    if (r > solution.rate + tol) ++rep.violations;
  }
  rep.gap_at_supremum = solution.rate - rep.supremum;
  return rep;
}

}  // namespace rrd
