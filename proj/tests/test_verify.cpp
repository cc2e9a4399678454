#include "rsd/verify.hpp"

#include <doctest.h>

#include "oracles.hpp"
#include "rsd/generate.hpp"

using namespace rsd;
using rsd::testing::oracle_union_measure;
using rsd::testing::random_level;
using rsd::testing::random_subrect;

namespace {

Rectangle rect2(const Rational& alo, const Rational& ahi, const Rational& blo,
                const Rational& bhi) {
  return Rectangle({Interval(alo, ahi), Interval(blo, bhi)});
}

Rectangle rect1(const Rational& lo, const Rational& hi) {
  return Rectangle({Interval(lo, hi)});
}

StoppingPolicy depth_policy(int depth) {
  StoppingPolicy p;
  p.max_depth = depth;
  return p;
}

const std::vector<Rectangle> counterexample_selected = {
    rect2(0, Rational(2, 3), 0, 1),
    rect2(Rational(2, 3), 1, 0, Rational(4, 7)),
};

}  // namespace

TEST_CASE("check_disjoint") {
  CHECK(check_disjoint(counterexample_selected));
  const std::vector<Rectangle> overlapping = {rect1(0, Rational(3, 4)),
                                              rect1(Rational(1, 2), 1)};
  CHECK(!check_disjoint(overlapping));
  CHECK(check_disjoint({}));
}

TEST_CASE("check_means") {
  const GridDensity d = paper_counterexample();
  CumulativeTable t(d);
  const Level level{Rational(7, 8)};

  const MeansCheck ok = check_means(t, counterexample_selected, level, 0);
  CHECK(ok.ok);
  CHECK(ok.worst_deviation == 0);

  const std::vector<Rectangle> wrong = {rect2(0, Rational(1, 2), 0, 1)};
  const MeansCheck bad = check_means(t, wrong, level, 0);
  CHECK(!bad.ok);
  CHECK(bad.worst_deviation == Rational(1, 8));  // mean there is 1

  CHECK(check_means(t, {}, level, 0).ok);

  // Zero-measure rectangles are failures with a reason.
  const std::vector<Rectangle> degenerate = {
      rect2(Rational(1, 2), Rational(1, 2), 0, 1)};
  const MeansCheck zero = check_means(t, degenerate, level, 0);
  CHECK(!zero.ok);
  CHECK(zero.detail.find("zero-measure") != std::string::npos);

  // A tolerance admits nearby means.
  CHECK(check_means(t, wrong, level, Rational(1, 4)).ok);
}

TEST_CASE("residual_violation_measure") {
  const GridDensity d = paper_counterexample();
  const Level level{Rational(7, 8)};

  CHECK(residual_violation_measure(d, counterexample_selected, level) == 0);

  GridDensity ones(rect2(0, 1, 0, 1), {2, 2},
                   {Rational(1), Rational(1), Rational(1), Rational(1)});
  CHECK(residual_violation_measure(ones, {}, Level{Rational(1)}) == 0);

  // Without any selection, the whole f = 1 region violates the level.
  CHECK(residual_violation_measure(d, {}, level) == Rational(3, 4));
}

TEST_CASE("residual_violation against direct cell summation") {
  for (std::uint64_t seed = 100; seed <= 130; ++seed) {
    const GridDensity d = random_density(seed);
    CumulativeTable t(d);
    Rng rng(seed * 13);
    const Level level{random_level(rng, d, t)};
    Rational direct = 0;
    std::vector<int> idx(d.dim(), 0);
    for (std::size_t flat = 0; flat < d.cell_count(); ++flat) {
      if (d.f(flat) > level.value) {
        std::size_t rest = flat;
        Rational vol = 1;
        for (int axis = d.dim() - 1; axis >= 0; --axis) {
          const int i =
              static_cast<int>(rest % static_cast<std::size_t>(d.cells(axis)));
          rest /= static_cast<std::size_t>(d.cells(axis));
          vol *= d.edges(axis)[i + 1] - d.edges(axis)[i];
        }
        direct += d.w(flat) * vol;
      }
    }
    CHECK(residual_violation_measure(d, {}, level) == direct);
  }
}

TEST_CASE("check_dyadic_property") {
  const GridDensity d = paper_counterexample();
  const Decomposition dec =
      rising_sun_decompose(d, Level{Rational(7, 8)}, depth_policy(16));
  CHECK(check_dyadic_property(dec));

  const std::vector<Rectangle> injected = {rect1(0, Rational(3, 4)),
                                           rect1(Rational(1, 2), 1)};
  CHECK(!check_dyadic_list(injected));

  // Nested and equal pairs are fine.
  const std::vector<Rectangle> nested = {rect1(0, 1), rect1(0, Rational(1, 2)),
                                         rect1(0, 1)};
  CHECK(check_dyadic_list(nested));

  Decomposition single;
  single.level.value = Rational(1);
  single.root = std::make_unique<DivisionNode>(rect1(0, 1), 0);
  single.root->outcome = ResidualLeaf{LeafReason::below_level};
  CHECK(check_dyadic_property(single));
}

TEST_CASE("check_halving_and_decay") {
  const GridDensity d = paper_counterexample();
  const Decomposition dec =
      rising_sun_decompose(d, Level{Rational(7, 8)}, depth_policy(16));
  const auto [halving, decay] = check_halving_and_decay(dec);
  CHECK(halving);
  CHECK(decay);

  // An injected cut at 9/10 grows the continuing child beyond half.
  Decomposition bad;
  bad.level.value = Rational(1);
  bad.root = std::make_unique<DivisionNode>(rect1(0, 1), 0);
  auto selected = std::make_unique<DivisionNode>(rect1(Rational(9, 10), 1), 1);
  selected->outcome = SelectedWhole{};
  auto continuing =
      std::make_unique<DivisionNode>(rect1(0, Rational(9, 10)), 1);
  continuing->outcome = ResidualLeaf{LeafReason::below_level};
  bad.root->outcome = CutSelected{0, Rational(9, 10), GrowSide::upper,
                                  std::move(selected), std::move(continuing)};
  const auto [bad_halving, bad_decay] = check_halving_and_decay(bad);
  CHECK(!bad_halving);

  // Trees shallower than the dimension satisfy decay vacuously.
  const Decomposition shallow =
      rising_sun_decompose(d, Level{Rational(3, 4)}, depth_policy(16));
  CHECK(check_halving_and_decay(shallow).second);
}

TEST_CASE("union_measure") {
  const GridDensity d = paper_counterexample();
  CHECK(union_measure(d, counterexample_selected) == Rational(6, 7));

  const std::vector<Rectangle> twice = {counterexample_selected[0],
                                        counterexample_selected[0]};
  CHECK(union_measure(d, twice) == Rational(2, 3));

  CHECK(union_measure(d, {}) == 0);
}

TEST_CASE("union_measure agrees with the rasterization oracle") {
  for (std::uint64_t seed = 200; seed <= 240; ++seed) {
    const GridDensity d = random_density(seed);
    Rng rng(seed * 101 + 3);
    std::vector<Rectangle> rects;
    const int k = 1 + static_cast<int>(rng.below(8));
    for (int i = 0; i < k; ++i) rects.push_back(random_subrect(rng, d.domain()));
    CHECK(union_measure(d, rects) == oracle_union_measure(d, rects));
  }
}

TEST_CASE("check_cz_bounds") {
  GridDensity d(rect2(0, 1, 0, 1), {2, 2},
                {Rational(4), Rational(0), Rational(0), Rational(0)});
  CumulativeTable t(d);
  const Level level{Rational(3, 2)};
  const auto cubes = cz_decompose(d, level, depth_policy(8));
  CHECK(check_cz_bounds(t, cubes, level));

  // A cube whose mean is at most the level violates the lower bound.
  std::vector<CzCube> fake = {{rect2(Rational(1, 2), 1, 0, Rational(1, 2)),
                               Rational(0), 1}};
  CHECK(!check_cz_bounds(t, fake, level));
}

TEST_CASE("verify_decomposition passes complete exact runs") {
  for (std::uint64_t seed = 300; seed <= 330; ++seed) {
    const GridDensity d = random_density(seed);
    CumulativeTable t(d);
    Rng rng(seed ^ 999);
    const Level level{random_level(rng, d, t)};
    const Decomposition dec = rising_sun_decompose(d, level, depth_policy(10));
    if (!dec.complete) continue;
    const VerificationReport report = verify_decomposition(d, dec);
    CHECK(report.all_pass());
    CHECK(report.worst_mean_deviation == 0);
    CHECK(report.residual_violation == 0);
  }
}

TEST_CASE("verify_decomposition flags a tampered selection") {
  const GridDensity d = paper_counterexample();
  Decomposition dec =
      rising_sun_decompose(d, Level{Rational(7, 8)}, depth_policy(16));
  dec.selected[0].rect = rect2(0, Rational(1, 2), 0, 1);
  const VerificationReport report = verify_decomposition(d, dec);
  CHECK(!report.means_ok);
  CHECK(!report.all_pass());
  CHECK(report.render().find("means_ok: false") != std::string::npos);
}

TEST_CASE("report renders a fixed-order block") {
  VerificationReport report;
  const std::string text = report.render();
  CHECK(text.find("disjoint_ok: true") == 0);
  CHECK(text.find("cz_bounds_ok: n/a") != std::string::npos);
  CHECK(text.find("all_pass: true") != std::string::npos);
}
