#include "rsd/generate.hpp"

#include "rsd/errors.hpp"

namespace rsd {

std::uint64_t Rng::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  return next() % bound;
}

long Rng::int_in(long lo, long hi) {
  return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
}

Rational Rng::rational_in(long lo, long hi, long max_den) {
  const long den = int_in(1, max_den);
  const long num = int_in(lo * den, hi * den);
  return Rational(num, den);
}

GridDensity paper_counterexample() {
  Rectangle domain({Interval(0, 1), Interval(0, 1)});
  return GridDensity(std::move(domain), {2, 2},
                     {Rational(1), Rational(1), Rational(1), Rational(0)});
}

GridDensity riesz_step_1d() {
  Rectangle domain({Interval(0, 1)});
  return GridDensity(std::move(domain), {2}, {Rational(2), Rational(0)});
}

GridDensity random_density(std::uint64_t seed,
                           const RandomDensityOptions& options) {
  Rng rng(seed);
  const int n =
      options.dim > 0 ? options.dim : 1 + static_cast<int>(rng.below(3));
  if (n < 1) fail(Errc::precondition, "random density dimension must be >= 1");

  std::vector<Interval> sides;
  std::vector<int> cells;
  std::size_t count = 1;
  const Rational cube_len = rng.rational_in(1, 4, 4);
  const int cube_cells =
      static_cast<int>(rng.int_in(1, options.max_cells_per_axis));
  for (int axis = 0; axis < n; ++axis) {
    Rational lo = rng.rational_in(-4, 4, 4);
    Rational len = options.cube
                       ? cube_len
                       : rng.rational_in(1, 4, 4) / Rational(rng.int_in(1, 2));
    sides.emplace_back(lo, lo + len);
    const int m =
        options.cube
            ? cube_cells
            : static_cast<int>(rng.int_in(1, options.max_cells_per_axis));
    cells.push_back(m);
    count *= static_cast<std::size_t>(m);
  }
  Rectangle domain(std::move(sides));

  // A quarter of the axes get jittered (non-uniform) breakpoints:
  // e_k = lo + len*(k + j_k)/m with |j_k| <= 1/4 keeps them increasing.
  std::vector<std::vector<Rational>> edges(n);
  for (int axis = 0; axis < n; ++axis) {
    if (cells[axis] < 2 || rng.below(4) != 0) continue;
    const Interval& side = domain.side(axis);
    const Rational len = side.length();
    std::vector<Rational> e;
    e.push_back(side.lo());
    for (int k = 1; k < cells[axis]; ++k) {
      const Rational jitter = rng.rational_in(-1, 1, 8) / Rational(4);
      e.push_back(side.lo() +
                  len * (Rational(k) + jitter) / Rational(cells[axis]));
    }
    e.push_back(side.hi());
    edges[axis] = std::move(e);
  }

  std::vector<Rational> f, w;
  f.reserve(count);
  w.reserve(count);
  const long f_lo = options.nonnegative_f ? 0 : -options.max_abs_f;
  for (std::size_t c = 0; c < count; ++c) {
    f.push_back(rng.rational_in(f_lo, options.max_abs_f, 8));
    if (options.lebesgue) {
      w.push_back(1);
    } else {
      // Weights: mostly positive, with occasional zero-measure cells.
      w.push_back(rng.below(8) == 0 ? Rational(0)
                                    : rng.rational_in(0, options.max_w, 8));
    }
  }
  bool any_weight = false;
  for (const Rational& x : w) any_weight = any_weight || !x.is_zero();
  if (!any_weight) w[0] = 1;

  return GridDensity(std::move(domain), std::move(cells), std::move(f),
                     std::move(w), std::move(edges));
}

}  // namespace rsd
