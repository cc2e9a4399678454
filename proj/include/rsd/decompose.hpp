#ifndef RSD_DECOMPOSE_HPP
#define RSD_DECOMPOSE_HPP

#include <functional>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "rsd/density.hpp"
#include "rsd/geometry.hpp"
#include "rsd/rational.hpp"

namespace rsd {

// The prescribed mean value A.
struct Level {
  Rational value;
};

// Exact arithmetic is authoritative; the floating mode mirrors every
// numeric evaluation in double for speed comparisons. Either way the
// emitted rectangles and means are exact rationals (binary-float results
// are dyadic rationals).
enum class Mode { exact, floating };

// Guards against the countable-infinite case: at least one of
// min_side > 0, max_depth finite must hold.
struct StoppingPolicy {
  Rational min_side = Rational(0);
  std::optional<int> max_depth;
  std::optional<long> max_selected;

  void validate() const;
};

enum class LeafReason { below_level, zero_measure, resolution_limit };
enum class GrowSide { lower, upper };

struct DivisionNode;

// rect itself enters the selected family (mean equals the level).
struct SelectedWhole {};

// Both midpoint halves have mean < A; division continues in each.
struct SplitBoth {
  int axis;
  Rational midpoint;
  std::unique_ptr<DivisionNode> lower, upper;
};

// The hyperplane slid to position `cut`; the grown half (on side `grow`)
// has mean exactly A and is selected, the other half continues.
struct CutSelected {
  int axis;
  Rational cut;
  GrowSide grow;
  std::unique_ptr<DivisionNode> selected_child, continuing_child;
};

struct ResidualLeaf {
  LeafReason reason;
};

struct DivisionNode {
  DivisionNode(Rectangle r, int d) : rect(std::move(r)), depth(d) {}

  Rectangle rect;
  std::optional<Rational> mean;  // nullopt when μ(rect) = 0
  int depth = 0;
  // monostate marks a node whose classification is still pending.
  std::variant<std::monostate, SplitBoth, CutSelected, SelectedWhole,
               ResidualLeaf>
      outcome;

  bool is_internal() const {
    return std::holds_alternative<SplitBoth>(outcome) ||
           std::holds_alternative<CutSelected>(outcome);
  }
  bool is_selected_leaf() const {
    return std::holds_alternative<SelectedWhole>(outcome);
  }
};

struct SelectedRect {
  Rectangle rect;
  Rational mean;
  int depth = 0;
};

struct Decomposition {
  Level level;
  std::vector<SelectedRect> selected;
  std::vector<std::pair<Rectangle, LeafReason>> residual_leaves;
  std::unique_ptr<DivisionNode> root;  // may be null for deserialized files
  bool complete = true;
};

// One division of `rect`: midpoint split of the longest side plus the
// classification of the halves by their means.
struct DivisionStep {
  enum class Kind { split_both, cut_selected };
  Kind kind;
  int axis;
  Rational position;  // midpoint for split_both, cut for cut_selected
  GrowSide grow = GrowSide::lower;  // cut_selected: side that was grown
  Rectangle first_child;            // split: lower half; cut: selected
  Rectangle second_child;           // split: upper half; cut: continuing
  std::optional<Rational> first_mean, second_mean;
};

// Slides the midpoint hyperplane toward the far end until the grown
// rectangle has mean exactly A. h(t) = ∫_{R(t)} f dμ − A·μ(R(t)) is
// piecewise linear with breakpoints at cell edges; the crossing nearest
// the midpoint is returned, as the exact root of one linear piece.
// Preconditions: μ(rect) > 0, mean(rect) < A, and the midpoint half on
// side `grow_from` has mean > A.
Rational find_cut(const CumulativeTable& table, const Rectangle& rect,
                  int axis, const Level& level, GrowSide grow_from);

// Splits rect at the midpoint of its longest side and classifies the
// halves. A half with zero measure counts as mean < A. Preconditions:
// μ(rect) > 0 and mean(rect) < A.
DivisionStep divide_step(const CumulativeTable& table, const Rectangle& rect,
                         const Level& level);

// The full division argument at level A: pairwise disjoint rectangles with
// mean exactly A, f ≤ A μ-a.e. outside their union when complete.
Decomposition rising_sun_decompose(const GridDensity& d, const Level& level,
                                   const StoppingPolicy& policy,
                                   Mode mode = Mode::exact);

// The n = 1 specialization (subintervals of an interval).
Decomposition riesz_1d(const GridDensity& d, const Level& level,
                       const StoppingPolicy& policy, Mode mode = Mode::exact);

struct CzCube {
  Rectangle cube;
  Rational mean;
  int depth = 0;
};

// Classical dyadic baseline on a cube with Lebesgue weights and f ≥ 0:
// halve every axis, select a subcube as soon as its mean exceeds A (the
// mean is then ≤ 2^n·A), recurse otherwise. Runs in exact arithmetic.
std::vector<CzCube> cz_decompose(const GridDensity& d, const Level& level,
                                 const StoppingPolicy& policy);

// All rectangles of internal (division) nodes, preorder.
std::vector<Rectangle> division_rectangles(const Decomposition& dec);

// Preorder walk over every node; f(node) is called for each.
void walk_tree(const DivisionNode& node,
               const std::function<void(const DivisionNode&)>& f);

}  // namespace rsd

#endif
