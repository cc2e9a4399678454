#include "rsd/verify.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>

#include "rsd/errors.hpp"

namespace rsd {

bool VerificationReport::all_pass() const {
  return disjoint_ok && means_ok && residual_ok && dyadic_ok && halving_ok &&
         diameter_decay_ok && cz_bounds_ok.value_or(true);
}

std::string VerificationReport::render() const {
  const auto b = [](bool v) { return v ? "true" : "false"; };
  std::ostringstream os;
  os << "disjoint_ok: " << b(disjoint_ok) << "\n";
  os << "means_ok: " << b(means_ok) << "\n";
  os << "worst_mean_deviation: " << worst_mean_deviation << "\n";
  os << "residual_violation: " << residual_violation << "\n";
  os << "residual_ok: " << b(residual_ok) << "\n";
  os << "dyadic_ok: " << b(dyadic_ok) << "\n";
  os << "halving_ok: " << b(halving_ok) << "\n";
  os << "diameter_decay_ok: " << b(diameter_decay_ok) << "\n";
  os << "cz_bounds_ok: " << (cz_bounds_ok ? b(*cz_bounds_ok) : "n/a") << "\n";
  os << "all_pass: " << b(all_pass()) << "\n";
  return os.str();
}

bool check_disjoint(std::span<const Rectangle> rects) {
  for (std::size_t i = 0; i < rects.size(); ++i) {
    for (std::size_t j = i + 1; j < rects.size(); ++j) {
      if (relation(rects[i], rects[j]) != RectRelation::disjoint) return false;
    }
  }
  return true;
}

MeansCheck check_means(const CumulativeTable& table,
                       std::span<const Rectangle> rects, const Level& level,
                       const Rational& tolerance) {
  MeansCheck result;
  for (const Rectangle& r : rects) {
    const Rational mu = table.measure(r);
    if (mu.is_zero()) {
      result.ok = false;
      if (result.detail.empty()) {
        result.detail = "zero-measure rectangle " + format_rectangle(r);
      }
      continue;
    }
    const Rational deviation =
        ((table.integral_f(r) - level.value * mu) / mu).abs();
    result.worst_deviation = max(result.worst_deviation, deviation);
    if (deviation > tolerance) {
      result.ok = false;
      if (result.detail.empty()) {
        result.detail = "mean deviates by " + deviation.str() + " on " +
                        format_rectangle(r);
      }
    }
  }
  return result;
}

namespace {

// Per-axis compressed breakpoints plus, for every elementary interval, the
// set of input rectangles covering it (as bitmask chunks) and the owning
// density cell.
struct Compression {
  std::vector<std::vector<Rational>> cuts;               // per axis
  std::vector<std::vector<std::vector<std::uint64_t>>> covers;  // axis -> interval -> chunks
  std::vector<std::vector<int>> cell_of;                 // axis -> interval -> cell
  std::size_t chunks = 0;
};

Compression compress(const GridDensity& d, std::span<const Rectangle> rects,
                     bool include_cell_edges) {
  const int n = d.dim();
  Compression c;
  c.chunks = (rects.size() + 63) / 64;
  c.cuts.resize(n);
  c.covers.resize(n);
  c.cell_of.resize(n);
  for (int axis = 0; axis < n; ++axis) {
    auto& cuts = c.cuts[axis];
    if (include_cell_edges) {
      cuts = d.edges(axis);
    } else {
      cuts.push_back(d.domain().side(axis).lo());
      cuts.push_back(d.domain().side(axis).hi());
    }
    for (const Rectangle& r : rects) {
      cuts.push_back(r.side(axis).lo());
      cuts.push_back(r.side(axis).hi());
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const std::size_t intervals = cuts.size() - 1;
    c.covers[axis].assign(intervals,
                          std::vector<std::uint64_t>(c.chunks, 0));
    for (std::size_t k = 0; k < rects.size(); ++k) {
      const Interval& s = rects[k].side(axis);
      const auto first = std::lower_bound(cuts.begin(), cuts.end(), s.lo());
      const auto last = std::lower_bound(cuts.begin(), cuts.end(), s.hi());
      for (auto it = first; it != last; ++it) {
        const std::size_t j = static_cast<std::size_t>(it - cuts.begin());
        c.covers[axis][j][k / 64] |= std::uint64_t(1) << (k % 64);
      }
    }
    c.cell_of[axis].resize(intervals);
    const auto& e = d.edges(axis);
    for (std::size_t j = 0; j < intervals; ++j) {
      const auto it = std::upper_bound(e.begin(), e.end(), cuts[j]);
      int cell = static_cast<int>(it - e.begin()) - 1;
      cell = std::min(std::max(cell, 0), d.cells(axis) - 1);
      c.cell_of[axis][j] = cell;
    }
  }
  return c;
}

void require_inside_domain(const GridDensity& d,
                           std::span<const Rectangle> rects) {
  for (const Rectangle& r : rects) {
    if (r.dim() != d.dim() || !d.domain().contains(r)) {
      fail(Errc::precondition, "rectangle not inside the density domain");
    }
  }
}

}  // namespace

Rational residual_violation_measure(const GridDensity& d,
                                    std::span<const Rectangle> selected,
                                    const Level& level) {
  require_inside_domain(d, selected);
  const int n = d.dim();
  const Compression c = compress(d, selected, /*include_cell_edges=*/true);

  // Cells that can contribute: f > A with positive weight.
  std::vector<char> hot(d.cell_count(), 0);
  for (std::size_t cell = 0; cell < d.cell_count(); ++cell) {
    hot[cell] = d.f(cell) > level.value && d.w(cell) > 0;
  }

  Rational violation = 0;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    std::size_t flat = 0;
    for (int axis = 0; axis < n; ++axis) {
      flat = flat * static_cast<std::size_t>(d.cells(axis)) +
             static_cast<std::size_t>(c.cell_of[axis][idx[axis]]);
    }
    if (hot[flat]) {
      bool covered = false;
      for (std::size_t chunk = 0; chunk < c.chunks && !covered; ++chunk) {
        std::uint64_t mask = ~std::uint64_t(0);
        for (int axis = 0; axis < n; ++axis) {
          mask &= c.covers[axis][idx[axis]][chunk];
        }
        covered = mask != 0;
      }
      if (!covered) {
        Rational vol = 1;
        for (int axis = 0; axis < n; ++axis) {
          vol *= c.cuts[axis][idx[axis] + 1] - c.cuts[axis][idx[axis]];
        }
        violation += d.w(flat) * vol;
      }
    }
    int axis = n - 1;
    while (axis >= 0 && ++idx[axis] == c.cuts[axis].size() - 1) {
      idx[axis] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
  return violation;
}

Rational union_measure(const GridDensity& d, std::span<const Rectangle> rects) {
  require_inside_domain(d, rects);
  if (rects.empty()) return Rational(0);
  const int n = d.dim();
  const Compression c = compress(d, rects, /*include_cell_edges=*/false);
  const CumulativeTable table(d);

  Rational total = 0;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    bool covered = false;
    for (std::size_t chunk = 0; chunk < c.chunks && !covered; ++chunk) {
      std::uint64_t mask = ~std::uint64_t(0);
      for (int axis = 0; axis < n; ++axis) {
        mask &= c.covers[axis][idx[axis]][chunk];
      }
      covered = mask != 0;
    }
    if (covered) {
      std::vector<Interval> sides;
      sides.reserve(n);
      for (int axis = 0; axis < n; ++axis) {
        sides.emplace_back(c.cuts[axis][idx[axis]],
                           c.cuts[axis][idx[axis] + 1]);
      }
      total += table.measure(Rectangle(std::move(sides)));
    }
    int axis = n - 1;
    while (axis >= 0 && ++idx[axis] == c.cuts[axis].size() - 1) {
      idx[axis] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
  return total;
}

bool check_dyadic_list(std::span<const Rectangle> division_rects) {
  for (std::size_t i = 0; i < division_rects.size(); ++i) {
    for (std::size_t j = i + 1; j < division_rects.size(); ++j) {
      if (relation(division_rects[i], division_rects[j]) ==
          RectRelation::proper_overlap) {
        return false;
      }
    }
  }
  return true;
}

bool check_dyadic_property(const Decomposition& dec) {
  return check_dyadic_list(division_rectangles(dec));
}

namespace {

Rational longest_side(const Rectangle& r) {
  Rational best = r.side(0).length();
  for (int axis = 1; axis < r.dim(); ++axis) {
    best = max(best, r.side(axis).length());
  }
  return best;
}

struct HalvingDecayWalker {
  int n;
  bool halving_ok = true;
  bool decay_ok = true;
  std::vector<Rational> path;  // longest side per ancestor depth

  void visit(const DivisionNode& node) {
    if (!node.is_selected_leaf() &&
        static_cast<int>(path.size()) >= n) {
      const Rational& ancestor = path[path.size() - n];
      if (longest_side(node.rect) * Rational(2) > ancestor) decay_ok = false;
    }
    path.push_back(longest_side(node.rect));
    if (const auto* split = std::get_if<SplitBoth>(&node.outcome)) {
      const Rational parent_extent = node.rect.side(split->axis).length();
      for (const DivisionNode* child :
           {split->lower.get(), split->upper.get()}) {
        if (child->rect.side(split->axis).length() * Rational(2) >
            parent_extent) {
          halving_ok = false;
        }
        visit(*child);
      }
    } else if (const auto* cut = std::get_if<CutSelected>(&node.outcome)) {
      const Rational parent_extent = node.rect.side(cut->axis).length();
      if (cut->continuing_child->rect.side(cut->axis).length() * Rational(2) >
          parent_extent) {
        halving_ok = false;
      }
      visit(*cut->selected_child);
      visit(*cut->continuing_child);
    }
    path.pop_back();
  }
};

}  // namespace

std::pair<bool, bool> check_halving_and_decay(const Decomposition& dec) {
  if (!dec.root) return {true, true};
  HalvingDecayWalker walker;
  walker.n = dec.root->rect.dim();
  walker.visit(*dec.root);
  return {walker.halving_ok, walker.decay_ok};
}

bool check_cz_bounds(const CumulativeTable& table, std::span<const CzCube> cubes,
                     const Level& level) {
  mpz_class two_n;
  mpz_ui_pow_ui(two_n.get_mpz_t(), 2,
                static_cast<unsigned long>(table.density().dim()));
  const Rational upper = Rational(mpq_class(two_n)) * level.value;
  for (const CzCube& c : cubes) {
    const auto mean = table.mean(c.cube);
    if (!mean || !(*mean > level.value) || *mean > upper) return false;
  }
  return true;
}

VerificationReport verify_decomposition(const GridDensity& d,
                                        const Decomposition& dec,
                                        const Rational& tolerance) {
  const CumulativeTable table(d);
  std::vector<Rectangle> selected;
  selected.reserve(dec.selected.size());
  for (const SelectedRect& s : dec.selected) selected.push_back(s.rect);

  VerificationReport report;
  report.disjoint_ok = check_disjoint(selected);
  const MeansCheck means = check_means(table, selected, dec.level, tolerance);
  report.means_ok = means.ok;
  report.worst_mean_deviation = means.worst_deviation;
  report.residual_violation =
      residual_violation_measure(d, selected, dec.level);
  report.residual_ok =
      report.residual_violation <= tolerance * d.total_measure();
  report.dyadic_ok = check_dyadic_property(dec);
  const auto [halving, decay] = check_halving_and_decay(dec);
  report.halving_ok = halving;
  report.diameter_decay_ok = decay;
  return report;
}

}  // namespace rsd
