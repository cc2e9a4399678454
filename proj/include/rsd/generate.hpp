#ifndef RSD_GENERATE_HPP
#define RSD_GENERATE_HPP

#include <cstdint>

#include "rsd/density.hpp"
#include "rsd/rational.hpp"

namespace rsd {

// SplitMix64: fully specified, so identical seeds give identical streams
// on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  std::uint64_t below(std::uint64_t bound);  // [0, bound), bound > 0
  long int_in(long lo, long hi);             // inclusive range

  // Uniform-ish exact rational in [lo, hi] with denominator <= max_den.
  Rational rational_in(long lo, long hi, long max_den);

 private:
  std::uint64_t state_;
};

// f = 1 - indicator of the upper-right quarter: 2x2 grid on [0,1)^2 with
// f = (1,1,1,0) and Lebesgue weights.
GridDensity paper_counterexample();

// 1-D step: f = (2,0) on [0,1), two uniform cells.
GridDensity riesz_step_1d();

struct RandomDensityOptions {
  int dim = 0;                 // 0: derive from the seed, in {1,2,3}
  int max_cells_per_axis = 8;
  long max_abs_f = 16;         // |f| bound
  long max_w = 4;              // w in [0, max_w]
  bool nonnegative_f = false;  // e.g. for Calderon-Zygmund inputs
  bool cube = false;           // equal side lengths and cell counts
  bool lebesgue = false;       // w = 1 everywhere
};

// Seeded random density: rational bounds, f and w with bounded
// numerators/denominators, occasionally non-uniform breakpoints, at least
// one cell of positive weight.
GridDensity random_density(std::uint64_t seed,
                           const RandomDensityOptions& options = {});

}  // namespace rsd

#endif
