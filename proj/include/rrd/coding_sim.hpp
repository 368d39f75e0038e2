#ifndef RRD_CODING_SIM_HPP
#define RRD_CODING_SIM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "rrd/prob.hpp"
#include "rrd/robust.hpp"

namespace rrd {

// Random block codebook drawn i.i.d. per symbol from an output distribution.
// Word i depends only on (seed, i), so codebooks with the same seed and block
// length nest as prefixes when the rate grows.
struct Codebook {
  std::vector<std::uint32_t> symbols;  // word-major, count() x block_len
  std::size_t block_len = 0;
  double rate = 0.0;  // nats per symbol
  std::size_t count() const { return block_len ? symbols.size() / block_len : 0; }
  std::span<const std::uint32_t> word(std::size_t i) const {
    return {symbols.data() + i * block_len, block_len};
  }
};

// ceil(e^{n rate}) words; throws RateTooLargeForMemory beyond word_cap.
Codebook generate_codebook(const ProbVector& output_dist, std::size_t block_len,
                           double rate, std::uint64_t seed,
                           std::size_t word_cap = std::size_t{1} << 20);

struct EncodeResult {
  std::size_t index = 0;
  double distortion = 0.0;  // per-letter average
};

// Nearest codeword under the per-letter average distortion; ties go to the
// smallest index.
EncodeResult encode_block(std::span<const std::uint32_t> block, const Codebook& cb,
                          const DistortionMatrix& rho);

struct PerSourceStats {
  ProbVector source;
  double mean_distortion = 0.0;
  double std_err = 0.0;
  double exceed_frac = 0.0;  // fraction of blocks above budget + epsilon
};

struct SimReport {
  std::vector<PerSourceStats> per_source;
  double worst_mean = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
  std::size_t codebook_words = 0;
  double codebook_rate = 0.0;
  std::size_t block_len = 0;
};

// One shared codebook from nu* at rate + rate_margin; every sampled source in
// the ball (mu* and mu always included) encodes `trials` i.i.d. blocks
// against it. Deterministic for a fixed seed regardless of thread count.
SimReport simulate_admissibility(const ProblemInstance& instance,
                                 const RobustSolution& solution,
                                 std::size_t block_len, double rate_margin,
                                 int trials, int source_samples, double epsilon,
                                 std::uint64_t seed, int threads = 0);

struct ConverseReport {
  int samples = 0;
  int violations = 0;          // classical rate above the robust rate + tol
  double supremum = 0.0;       // max classical rate over the sampled sources
  double gap_at_supremum = 0.0;  // solution.rate - supremum
};

// Converse audit: R_{mu'}(D) <= robust rate for every sampled source, with
// the supremum approaching the robust rate at mu* (included deterministically).
ConverseReport converse_audit(const ProblemInstance& instance,
                              const RobustSolution& solution, int source_samples,
                              double tol, std::uint64_t seed, int threads = 0);

}  // namespace rrd

#endif  // RRD_CODING_SIM_HPP
