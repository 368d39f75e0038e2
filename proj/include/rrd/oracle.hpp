#ifndef RRD_ORACLE_HPP
#define RRD_ORACLE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "rrd/prob.hpp"

namespace rrd {

// Simplex-lattice search parameters.
struct GridSpec {
  double step = 0.01;     // barycentric lattice spacing in (0,1)
  int refine_rounds = 3;  // incumbent-centered passes, step halved each round
  int max_dim = 4;        // largest alphabet admitted for enumeration
};

// Grid maximum with a certified interval for the true supremum:
// [value, value + lipschitz * final_step * dim] modulo solver tolerance.
struct BruteForceResult {
  double value = 0.0;
  ProbVector argmax;
  double final_step = 0.0;
  double lipschitz = 0.0;  // finite-difference gradient bound near the argmax
  double certified_slack() const {
    return lipschitz * final_step * static_cast<double>(argmax.size());
  }
};

// Exhaustive outer maximization of the classical rate over the KL ball, the
// inner solve being exact (classical_rd). Throws AlphabetTooLarge beyond
// grid.max_dim. threads == 1 is the serial reference path; parallel runs
// reproduce it bit-for-bit (deterministic max-reduction, lexicographically
// smallest argmax on ties).
BruteForceResult brute_force_robust(const ProblemInstance& instance,
                                    const GridSpec& grid, double tol = 1e-9,
                                    int threads = 0);

// Grid maximum of a linear functional over the KL ball (primal side of the
// free-energy duality).
BruteForceResult brute_force_worstcase(std::span<const double> ell,
                                       const ProbVector& mu, double radius,
                                       const GridSpec& grid, int threads = 0);

// `count` distributions with KL(mu'||mu) <= radius: mu itself, the
// per-symbol tilted extremals, then seeded tilts (boundary-projected every
// third draw). Reproducible bit-for-bit for a fixed seed.
std::vector<ProbVector> sample_ball(const ProbVector& mu, double radius, int count,
                                    std::uint64_t seed);

// All barycentric lattice points k/K on the simplex of the given dimension.
std::vector<ProbVector> simplex_lattice(std::size_t dim, std::size_t K);

}  // namespace rrd

#endif  // RRD_ORACLE_HPP
