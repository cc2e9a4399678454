#include "rsd/decompose.hpp"

#include <algorithm>
#include <utility>

#include "rsd/errors.hpp"

namespace rsd {

void StoppingPolicy::validate() const {
  if (min_side < 0) fail(Errc::invalid_policy, "min_side must be >= 0");
  if (max_depth && *max_depth < 1) {
    fail(Errc::invalid_policy, "max_depth must be a positive integer");
  }
  if (max_selected && *max_selected < 1) {
    fail(Errc::invalid_policy, "max_selected must be a positive integer");
  }
  if (!(min_side > 0) && !max_depth) {
    fail(Errc::invalid_policy,
         "policy needs min_side > 0 or a finite max_depth");
  }
}

namespace {

template <class S>
struct ScalarOps;

template <>
struct ScalarOps<Rational> {
  static constexpr bool exact = true;
  static Rational from_rational(const Rational& r) { return r; }
  static Rational to_rational(const Rational& r) { return r; }
};

template <>
struct ScalarOps<double> {
  static constexpr bool exact = false;
  static double from_rational(const Rational& r) { return r.to_double(); }
  static Rational to_rational(double x) { return Rational::from_double(x); }
};

// Engine-side rectangle: endpoint arrays in the working scalar.
template <class S>
struct Box {
  std::vector<S> lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }
  S extent(int axis) const { return hi[axis] - lo[axis]; }
};

template <class S>
Box<S> to_box(const Rectangle& r) {
  Box<S> b;
  b.lo.reserve(r.dim());
  b.hi.reserve(r.dim());
  for (const Interval& s : r.sides()) {
    b.lo.push_back(ScalarOps<S>::from_rational(s.lo()));
    b.hi.push_back(ScalarOps<S>::from_rational(s.hi()));
  }
  return b;
}

template <class S>
Rectangle to_rectangle(const Box<S>& b) {
  std::vector<Interval> sides;
  sides.reserve(b.lo.size());
  for (std::size_t i = 0; i < b.lo.size(); ++i) {
    sides.emplace_back(ScalarOps<S>::to_rational(b.lo[i]),
                       ScalarOps<S>::to_rational(b.hi[i]));
  }
  return Rectangle(std::move(sides));
}

template <class S>
int box_longest_axis(const Box<S>& b) {
  int best = 0;
  for (int i = 1; i < b.dim(); ++i) {
    if (b.extent(best) < b.extent(i)) best = i;
  }
  return best;
}

// Density converted to the working scalar, with its prefix tables and the
// raw cell values needed for essential-sup queries.
template <class S>
struct EngineDensity {
  int n;
  std::vector<int> cells;
  std::vector<std::vector<S>> edges;
  std::vector<S> f, w;
  Box<S> domain;
  detail::PrefixTable<S> table;

  explicit EngineDensity(const GridDensity& d)
      : n(d.dim()), cells(d.cells_per_axis()), table(make_table(d)) {
    for (int axis = 0; axis < n; ++axis) {
      std::vector<S> e;
      e.reserve(d.edges(axis).size());
      for (const Rational& x : d.edges(axis)) {
        e.push_back(ScalarOps<S>::from_rational(x));
      }
      domain.lo.push_back(e.front());
      domain.hi.push_back(e.back());
      edges.push_back(std::move(e));
    }
    f.reserve(d.cell_count());
    w.reserve(d.cell_count());
    for (std::size_t c = 0; c < d.cell_count(); ++c) {
      f.push_back(ScalarOps<S>::from_rational(d.f(c)));
      w.push_back(ScalarOps<S>::from_rational(d.w(c)));
    }
  }

  static detail::PrefixTable<S> make_table(const GridDensity& d) {
    const std::size_t count = d.cell_count();
    const int n = d.dim();
    std::vector<std::vector<S>> edges;
    edges.reserve(n);
    for (int axis = 0; axis < n; ++axis) {
      std::vector<S> e;
      e.reserve(d.edges(axis).size());
      for (const Rational& x : d.edges(axis)) {
        e.push_back(ScalarOps<S>::from_rational(x));
      }
      edges.push_back(std::move(e));
    }
    std::vector<S> f_mass(count, S(0)), m_mass(count, S(0));
    for (std::size_t flat = 0; flat < count; ++flat) {
      S vol(1);
      std::size_t rest = flat;
      for (int axis = n - 1; axis >= 0; --axis) {
        const auto i = rest % static_cast<std::size_t>(d.cells(axis));
        rest /= static_cast<std::size_t>(d.cells(axis));
        vol = vol * (edges[axis][i + 1] - edges[axis][i]);
      }
      m_mass[flat] = ScalarOps<S>::from_rational(d.w(flat)) * vol;
      f_mass[flat] = ScalarOps<S>::from_rational(d.f(flat)) * m_mass[flat];
    }
    return detail::PrefixTable<S>(std::move(edges), f_mass, m_mass);
  }

  using Pos = typename detail::PrefixTable<S>::AxisPos;

  void positions(const Box<S>& b, std::vector<Pos>& lo,
                 std::vector<Pos>& hi) const {
    lo.clear();
    hi.clear();
    for (int axis = 0; axis < n; ++axis) {
      lo.push_back(table.locate(axis, b.lo[axis]));
      hi.push_back(table.locate(axis, b.hi[axis]));
    }
  }

  S measure(const Box<S>& b) const {
    std::vector<Pos> lo, hi;
    positions(b, lo, hi);
    return table.box_measure(lo, hi);
  }
  S integral(const Box<S>& b) const {
    std::vector<Pos> lo, hi;
    positions(b, lo, hi);
    return table.box_integral(lo, hi);
  }

  std::optional<S> ess_sup(const Box<S>& b) const {
    std::vector<std::pair<int, int>> ranges(n);
    std::vector<int> idx(n);
    for (int axis = 0; axis < n; ++axis) {
      if (!(b.lo[axis] < b.hi[axis])) return std::nullopt;
      const auto& e = edges[axis];
      const auto fit = std::upper_bound(e.begin() + 1, e.end(), b.lo[axis]);
      const int first = static_cast<int>(fit - e.begin()) - 1;
      const auto lit = std::lower_bound(e.begin(), e.end() - 1, b.hi[axis]);
      const int last = static_cast<int>(lit - e.begin());
      if (first >= last) return std::nullopt;
      ranges[axis] = {first, last};
      idx[axis] = first;
    }
    std::optional<S> best;
    while (true) {
      std::size_t flat = 0;
      for (int axis = 0; axis < n; ++axis) {
        flat = flat * static_cast<std::size_t>(cells[axis]) +
               static_cast<std::size_t>(idx[axis]);
      }
      if (w[flat] > S(0) && (!best || *best < f[flat])) best = f[flat];
      int axis = n - 1;
      while (axis >= 0 && ++idx[axis] == ranges[axis].second) {
        idx[axis] = ranges[axis].first;
        --axis;
      }
      if (axis < 0) break;
    }
    return best;
  }
};

// h(t) = ∫_{R(t)} f dμ − A·μ(R(t)) for the grown rectangle R(t); piecewise
// linear in t with breakpoints at the cell edges. Scans outward from the
// midpoint and solves the first sign-changing linear piece exactly.
template <class S>
S find_cut_scan(const detail::PrefixTable<S>& table, const Box<S>& box,
                int axis, const S& level, GrowSide grow) {
  const S mid = (box.lo[axis] + box.hi[axis]) / S(2);
  const S far = grow == GrowSide::lower ? box.hi[axis] : box.lo[axis];

  const auto h = [&](const S& t) {
    Box<S> b = box;
    (grow == GrowSide::lower ? b.hi[axis] : b.lo[axis]) = t;
    std::vector<typename detail::PrefixTable<S>::AxisPos> lo, hi;
    lo.reserve(b.dim());
    hi.reserve(b.dim());
    for (int i = 0; i < b.dim(); ++i) {
      lo.push_back(table.locate(i, b.lo[i]));
      hi.push_back(table.locate(i, b.hi[i]));
    }
    return table.box_integral(lo, hi) - level * table.box_measure(lo, hi);
  };

  // Cell edges strictly between the midpoint and the far end, ordered
  // outward from the midpoint.
  const auto& e = table.edges(axis);
  std::vector<S> stops;
  if (grow == GrowSide::lower) {
    for (auto it = std::upper_bound(e.begin(), e.end(), mid);
         it != e.end() && *it < far; ++it) {
      stops.push_back(*it);
    }
  } else {
    auto it = std::lower_bound(e.begin(), e.end(), mid);
    while (it != e.begin()) {
      --it;
      if (*it <= far) break;
      stops.push_back(*it);
    }
  }
  stops.push_back(far);

  S prev = mid;
  S h_prev = h(mid);
  if (!(h_prev > S(0))) {
    fail(Errc::internal_invariant, "find_cut: grown half does not exceed level");
  }
  for (const S& next : stops) {
    S h_next = h(next);
    if (!(h_next > S(0))) {
      if (h_next == S(0)) return next;
      // Exact root of the linear piece between prev and next.
      return prev + (next - prev) * h_prev / (h_prev - h_next);
    }
    prev = next;
    h_prev = std::move(h_next);
  }
  fail(Errc::internal_invariant, "find_cut: no sign change up to the far end");
}

enum class MeanClass { less, equal, greater };

// Classifies a half by the sign of g = ∫ f dμ − A·μ. Zero measure counts
// as "less": it can never host a selection and the a.e. conclusion is
// vacuous on it.
template <class S>
MeanClass classify(const S& mu, const S& g) {
  if (!(mu > S(0))) return MeanClass::less;
  if (g == S(0)) return MeanClass::equal;
  return g > S(0) ? MeanClass::greater : MeanClass::less;
}

template <class S>
struct StepCore {
  DivisionStep::Kind kind;
  int axis;
  S position;
  GrowSide grow = GrowSide::lower;
  Box<S> first, second;  // split: (lower, upper); cut: (selected, continuing)
  std::optional<S> first_mean, second_mean;
};

template <class S>
std::optional<S> box_mean(const EngineDensity<S>& ed, const Box<S>& b) {
  const S mu = ed.measure(b);
  if (!(mu > S(0))) return std::nullopt;
  return ed.integral(b) / mu;
}

// Midpoint split of the longest side plus classification of the halves.
// Precondition (checked by callers): μ(box) > 0 and mean(box) < A.
template <class S>
StepCore<S> divide_core(const EngineDensity<S>& ed, const Box<S>& box,
                        const S& level) {
  const int axis = box_longest_axis(box);
  const S mid = (box.lo[axis] + box.hi[axis]) / S(2);

  Box<S> lower = box;
  lower.hi[axis] = mid;
  Box<S> upper = box;
  upper.lo[axis] = mid;

  const S mu_lo = ed.measure(lower);
  const S mu_hi = ed.measure(upper);
  const S g_lo = ed.integral(lower) - level * mu_lo;
  const S g_hi = ed.integral(upper) - level * mu_hi;
  const MeanClass c_lo = classify(mu_lo, g_lo);
  const MeanClass c_hi = classify(mu_hi, g_hi);

  StepCore<S> step;
  step.axis = axis;

  if (c_lo == MeanClass::less && c_hi == MeanClass::less) {
    step.kind = DivisionStep::Kind::split_both;
    step.position = mid;
    step.first = std::move(lower);
    step.second = std::move(upper);
    if (mu_lo > S(0)) step.first_mean = ed.integral(step.first) / mu_lo;
    if (mu_hi > S(0)) step.second_mean = ed.integral(step.second) / mu_hi;
    return step;
  }
  if (c_lo == MeanClass::greater && c_hi == MeanClass::greater) {
    fail(Errc::internal_invariant,
         "divide_step: both halves above the level under a below-level parent");
  }
  if ((c_lo == MeanClass::greater && c_hi == MeanClass::equal) ||
      (c_lo == MeanClass::equal && c_hi == MeanClass::greater)) {
    fail(Errc::internal_invariant,
         "divide_step: half at the level paired with a half above it");
  }

  step.kind = DivisionStep::Kind::cut_selected;
  if (c_lo == MeanClass::equal || c_hi == MeanClass::equal) {
    // A midpoint half already has mean exactly A: select it as-is. When
    // both do, the lower one is selected and the upper continues.
    step.grow = c_lo == MeanClass::equal ? GrowSide::lower : GrowSide::upper;
    step.position = mid;
    if (step.grow == GrowSide::lower) {
      step.first = std::move(lower);
      step.second = std::move(upper);
      step.first_mean = level;
      step.second_mean = box_mean(ed, step.second);
    } else {
      step.first = std::move(upper);
      step.second = std::move(lower);
      step.first_mean = level;
      step.second_mean = box_mean(ed, step.second);
    }
    return step;
  }

  // One half above the level: slide the hyperplane.
  step.grow = c_lo == MeanClass::greater ? GrowSide::lower : GrowSide::upper;
  step.position = find_cut_scan(ed.table, box, axis, level, step.grow);
  step.first = box;
  step.second = box;
  if (step.grow == GrowSide::lower) {
    step.first.hi[axis] = step.position;
    step.second.lo[axis] = step.position;
  } else {
    step.first.lo[axis] = step.position;
    step.second.hi[axis] = step.position;
  }
  step.first_mean = box_mean(ed, step.first);
  if constexpr (ScalarOps<S>::exact) {
    if (!step.first_mean || *step.first_mean != level) {
      fail(Errc::internal_invariant,
           "divide_step: selected rectangle mean is not exactly the level");
    }
  }
  step.second_mean = box_mean(ed, step.second);
  return step;
}

template <class S>
class RisingSunEngine {
 public:
  RisingSunEngine(const GridDensity& d, const Level& level,
                  const StoppingPolicy& policy)
      : ed_(d),
        level_(ScalarOps<S>::from_rational(level.value)),
        policy_(policy),
        min_side_(ScalarOps<S>::from_rational(policy.min_side)) {
    out_.level = level;
  }

  Decomposition run() {
    const S mu0 = ed_.measure(ed_.domain);
    if (!(mu0 > S(0))) {
      fail(Errc::zero_total_measure, "domain has zero measure");
    }
    const S g0 = ed_.integral(ed_.domain) - level_ * mu0;
    if (g0 > S(0)) {
      fail(Errc::level_below_mean, "level below domain mean");
    }

    out_.root = std::make_unique<DivisionNode>(to_rectangle(ed_.domain), 0);
    stack_.push_back({out_.root.get(), ed_.domain});
    while (!stack_.empty()) {
      Item item = std::move(stack_.back());
      stack_.pop_back();
      process(item.node, item.box);
    }
    return std::move(out_);
  }

 private:
  struct Item {
    DivisionNode* node;
    Box<S> box;
  };

  bool budget_open() const {
    return !policy_.max_selected ||
           static_cast<long>(out_.selected.size()) < *policy_.max_selected;
  }

  void select_whole(DivisionNode* node, const S& mean) {
    node->outcome = SelectedWhole{};
    node->mean = ScalarOps<S>::to_rational(mean);
    out_.selected.push_back({node->rect, *node->mean, node->depth});
  }

  void make_leaf(DivisionNode* node, const Box<S>& box, LeafReason reason) {
    node->outcome = ResidualLeaf{reason};
    out_.residual_leaves.emplace_back(node->rect, reason);
    if (reason == LeafReason::resolution_limit) {
      const auto ess = ed_.ess_sup(box);
      if (ess && *ess > level_) out_.complete = false;
    }
  }

  void process(DivisionNode* node, const Box<S>& box) {
    const S mu = ed_.measure(box);
    if (!(mu > S(0))) {
      make_leaf(node, box, LeafReason::zero_measure);
      return;
    }
    const S integral = ed_.integral(box);
    const S g = integral - level_ * mu;
    const S mean = integral / mu;
    node->mean = ScalarOps<S>::to_rational(mean);

    if (g == S(0)) {
      if (budget_open()) {
        select_whole(node, mean);
        return;
      }
    } else if (g > S(0)) {
      if constexpr (ScalarOps<S>::exact) {
        // Impossible below the root: split and cut children provably have
        // mean < A, and the root was validated up front.
        fail(Errc::internal_invariant,
             "division rectangle above the level in exact mode");
      } else {
        if (budget_open()) {
          select_whole(node, mean);
          return;
        }
      }
    }

    const auto ess = ed_.ess_sup(box);
    if (!ess || !(*ess > level_)) {
      make_leaf(node, box, LeafReason::below_level);
      return;
    }

    const int axis = box_longest_axis(box);
    const bool depth_exhausted =
        policy_.max_depth && node->depth >= *policy_.max_depth;
    const bool side_exhausted =
        min_side_ > S(0) && box.extent(axis) / S(2) < min_side_;
    if (depth_exhausted || side_exhausted || !budget_open()) {
      make_leaf(node, box, LeafReason::resolution_limit);
      return;
    }

    StepCore<S> step = divide_core(ed_, box, level_);
    if (step.kind == DivisionStep::Kind::split_both) {
      auto lower = std::make_unique<DivisionNode>(to_rectangle(step.first),
                                                  node->depth + 1);
      auto upper = std::make_unique<DivisionNode>(to_rectangle(step.second),
                                                  node->depth + 1);
      DivisionNode* lower_ptr = lower.get();
      DivisionNode* upper_ptr = upper.get();
      node->outcome =
          SplitBoth{step.axis, ScalarOps<S>::to_rational(step.position),
                    std::move(lower), std::move(upper)};
      // Depth-first, lower child first.
      stack_.push_back({upper_ptr, std::move(step.second)});
      stack_.push_back({lower_ptr, std::move(step.first)});
      return;
    }

    auto selected = std::make_unique<DivisionNode>(to_rectangle(step.first),
                                                   node->depth + 1);
    auto continuing = std::make_unique<DivisionNode>(to_rectangle(step.second),
                                                     node->depth + 1);
    DivisionNode* continuing_ptr = continuing.get();

    select_whole(selected.get(), *step.first_mean);
    node->outcome =
        CutSelected{step.axis, ScalarOps<S>::to_rational(step.position),
                    step.grow, std::move(selected), std::move(continuing)};
    stack_.push_back({continuing_ptr, std::move(step.second)});
  }

  EngineDensity<S> ed_;
  S level_;
  StoppingPolicy policy_;
  S min_side_;
  Decomposition out_;
  std::vector<Item> stack_;
};

}  // namespace

Rational find_cut(const CumulativeTable& table, const Rectangle& rect,
                  int axis, const Level& level, GrowSide grow_from) {
  if (axis < 0 || axis >= rect.dim()) {
    fail(Errc::precondition, "find_cut: axis out of range");
  }
  const Rational mu = table.measure(rect);
  if (mu.is_zero()) fail(Errc::precondition, "find_cut: zero-measure rectangle");
  if (!(table.integral_f(rect) < level.value * mu)) {
    fail(Errc::precondition, "find_cut: rectangle mean not below the level");
  }
  const Interval& side = rect.side(axis);
  const Rational mid = (side.lo() + side.hi()) / Rational(2);
  auto halves = split_at(rect, axis, mid);
  const Rectangle& half =
      grow_from == GrowSide::lower ? halves.first : halves.second;
  const Rational half_mu = table.measure(half);
  if (!(table.integral_f(half) > level.value * half_mu) || half_mu.is_zero()) {
    fail(Errc::precondition,
         "find_cut: grown half mean does not exceed the level");
  }
  return find_cut_scan(table.raw(), to_box<Rational>(rect), axis, level.value,
                       grow_from);
}

DivisionStep divide_step(const CumulativeTable& table, const Rectangle& rect,
                         const Level& level) {
  const Rational mu = table.measure(rect);
  if (mu.is_zero()) {
    fail(Errc::precondition, "divide_step: zero-measure rectangle");
  }
  if (!(table.integral_f(rect) < level.value * mu)) {
    fail(Errc::precondition, "divide_step: rectangle mean not below the level");
  }
  EngineDensity<Rational> ed(table.density());
  StepCore<Rational> core = divide_core(ed, to_box<Rational>(rect), level.value);
  return DivisionStep{core.kind,
                      core.axis,
                      core.position,
                      core.grow,
                      to_rectangle(core.first),
                      to_rectangle(core.second),
                      core.first_mean,
                      core.second_mean};
}

Decomposition rising_sun_decompose(const GridDensity& d, const Level& level,
                                   const StoppingPolicy& policy, Mode mode) {
  policy.validate();
  if (mode == Mode::exact) {
    return RisingSunEngine<Rational>(d, level, policy).run();
  }
  return RisingSunEngine<double>(d, level, policy).run();
}

Decomposition riesz_1d(const GridDensity& d, const Level& level,
                       const StoppingPolicy& policy, Mode mode) {
  if (d.dim() != 1) {
    fail(Errc::precondition, "riesz_1d requires a one-dimensional density");
  }
  return rising_sun_decompose(d, level, policy, mode);
}

std::vector<CzCube> cz_decompose(const GridDensity& d, const Level& level,
                                 const StoppingPolicy& policy) {
  policy.validate();
  const int n = d.dim();
  const Rational side_len = d.domain().side(0).length();
  for (int axis = 1; axis < n; ++axis) {
    if (d.domain().side(axis).length() != side_len) {
      fail(Errc::non_cube_domain, "cz_decompose requires a cube domain");
    }
    if (d.cells(axis) != d.cells(0)) {
      fail(Errc::non_cube_domain,
           "cz_decompose requires equal cell counts per axis");
    }
  }
  if (!d.lebesgue_weights()) {
    fail(Errc::non_lebesgue_weights, "cz_decompose requires w = 1 everywhere");
  }
  for (std::size_t c = 0; c < d.cell_count(); ++c) {
    if (d.f(c) < 0) {
      fail(Errc::negative_values, "cz_decompose requires f >= 0");
    }
  }
  if (side_len.is_zero()) {
    fail(Errc::zero_total_measure, "domain has zero measure");
  }

  CumulativeTable table(d);
  const auto root_mean = table.mean(d.domain());
  if (root_mean && *root_mean > level.value) {
    fail(Errc::level_below_mean, "level below domain mean");
  }

  std::vector<CzCube> selected;
  struct Item {
    Rectangle cube;
    int depth;
  };
  std::vector<Item> stack;
  stack.push_back({d.domain(), 0});
  const bool budget = policy.max_selected.has_value();
  while (!stack.empty()) {
    Item item = std::move(stack.back());
    stack.pop_back();
    const Rational mean = *table.mean(item.cube);
    if (mean > level.value) {
      if (budget &&
          static_cast<long>(selected.size()) >= *policy.max_selected) {
        continue;
      }
      selected.push_back({std::move(item.cube), mean, item.depth});
      continue;
    }
    const auto ess = essential_sup_f(d, item.cube);
    if (!ess || !(*ess > level.value)) continue;
    const Rational half = item.cube.side(0).length() / Rational(2);
    const bool exhausted =
        (policy.max_depth && item.depth >= *policy.max_depth) ||
        (policy.min_side > 0 && half < policy.min_side) ||
        (budget && static_cast<long>(selected.size()) >= *policy.max_selected);
    if (exhausted) continue;

    // 2^n congruent subcubes; pushed in reverse so the pop order walks the
    // lower half of axis 0 first, last axis fastest.
    std::vector<Rational> mids;
    mids.reserve(n);
    for (int axis = 0; axis < n; ++axis) {
      mids.push_back((item.cube.side(axis).lo() + item.cube.side(axis).hi()) /
                     Rational(2));
    }
    for (int b = (1 << n) - 1; b >= 0; --b) {
      std::vector<Interval> sides;
      sides.reserve(n);
      for (int axis = 0; axis < n; ++axis) {
        const bool high = (b >> (n - 1 - axis)) & 1;
        const Interval& s = item.cube.side(axis);
        sides.emplace_back(high ? mids[axis] : s.lo(),
                           high ? s.hi() : mids[axis]);
      }
      stack.push_back({Rectangle(std::move(sides)), item.depth + 1});
    }
  }
  return selected;
}

void walk_tree(const DivisionNode& node,
               const std::function<void(const DivisionNode&)>& f) {
  f(node);
  if (const auto* split = std::get_if<SplitBoth>(&node.outcome)) {
    walk_tree(*split->lower, f);
    walk_tree(*split->upper, f);
  } else if (const auto* cut = std::get_if<CutSelected>(&node.outcome)) {
    walk_tree(*cut->selected_child, f);
    walk_tree(*cut->continuing_child, f);
  }
}

std::vector<Rectangle> division_rectangles(const Decomposition& dec) {
  std::vector<Rectangle> rects;
  if (dec.root) {
    walk_tree(*dec.root, [&](const DivisionNode& node) {
      if (node.is_internal()) rects.push_back(node.rect);
    });
  }
  return rects;
}

}  // namespace rsd
