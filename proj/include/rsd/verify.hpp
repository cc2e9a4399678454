#ifndef RSD_VERIFY_HPP
#define RSD_VERIFY_HPP

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rsd/decompose.hpp"
#include "rsd/density.hpp"
#include "rsd/geometry.hpp"
#include "rsd/rational.hpp"

namespace rsd {

// Aggregated result of the independent checker. Everything is recomputed
// from the density; cached means inside a decomposition are never trusted.
struct VerificationReport {
  bool disjoint_ok = true;
  bool means_ok = true;
  Rational worst_mean_deviation = Rational(0);
  Rational residual_violation = Rational(0);
  bool residual_ok = true;
  bool dyadic_ok = true;
  bool halving_ok = true;
  bool diameter_decay_ok = true;
  std::optional<bool> cz_bounds_ok;

  bool all_pass() const;
  std::string render() const;  // fixed-order key:value block
};

// True iff all pairs are disjoint under half-open semantics.
bool check_disjoint(std::span<const Rectangle> rects);

struct MeansCheck {
  bool ok = true;
  Rational worst_deviation = Rational(0);
  std::string detail;  // set on the first failure
};

// Every rectangle must satisfy |∫f dμ − A·μ| <= tolerance·μ with μ > 0;
// tolerance 0 is the exact-mode contract. Zero-measure rectangles are
// reported as failures.
MeansCheck check_means(const CumulativeTable& table,
                       std::span<const Rectangle> rects, const Level& level,
                       const Rational& tolerance);

// Exact μ-mass of {x in I_0 \ ∪selected : f(x) > A}, by coordinate
// compression over the cell edges and the selected rectangles' breakpoints.
Rational residual_violation_measure(const GridDensity& d,
                                    std::span<const Rectangle> selected,
                                    const Level& level);

// True iff every pair of division rectangles is nested or disjoint.
bool check_dyadic_list(std::span<const Rectangle> division_rects);
bool check_dyadic_property(const Decomposition& dec);

// halving: every continuing/split child's cut-axis extent is at most half
// the parent's. decay: for every ancestor and non-selected descendant
// exactly dim levels apart, the longest side at most halves.
std::pair<bool, bool> check_halving_and_decay(const Decomposition& dec);

// Exact μ(∪rects) via per-axis coordinate compression into at most
// (2k+1)^n boxes, each fully inside or outside the union.
Rational union_measure(const GridDensity& d, std::span<const Rectangle> rects);

// Every selected cube mean must lie in (A, 2^n·A].
bool check_cz_bounds(const CumulativeTable& table, std::span<const CzCube> cubes,
                     const Level& level);

// Runs every applicable check. The residual check passes when the
// violation mass is at most tolerance times the total measure (zero in
// exact mode). Tree-structure checks hold vacuously when the
// decomposition carries no tree.
VerificationReport verify_decomposition(const GridDensity& d,
                                        const Decomposition& dec,
                                        const Rational& tolerance = Rational(0));

}  // namespace rsd

#endif
