#include "rsd/density.hpp"

#include <algorithm>

#include "rsd/errors.hpp"

namespace rsd {

namespace {

std::vector<Rational> uniform_breakpoints(const Interval& side, int m) {
  std::vector<Rational> e;
  e.reserve(m + 1);
  const Rational len = side.length();
  for (int k = 0; k <= m; ++k) {
    e.push_back(side.lo() + Rational(k) * len / Rational(m));
  }
  return e;
}

}  // namespace

GridDensity::GridDensity(Rectangle domain, std::vector<int> cells_per_axis,
                         std::vector<Rational> f_values,
                         std::vector<Rational> w_values,
                         std::vector<std::vector<Rational>> edges,
                         bool allow_zero_total_measure)
    : domain_(std::move(domain)),
      cells_(std::move(cells_per_axis)),
      f_(std::move(f_values)),
      w_(std::move(w_values)) {
  const int n = domain_.dim();
  if (static_cast<int>(cells_.size()) != n) {
    fail(Errc::precondition, "cells_per_axis size does not match dimension");
  }
  std::size_t count = 1;
  for (int axis = 0; axis < n; ++axis) {
    if (cells_[axis] < 1) fail(Errc::precondition, "cells per axis must be >= 1");
    count *= static_cast<std::size_t>(cells_[axis]);
  }
  if (f_.size() != count) {
    fail(Errc::precondition, "f value count does not match grid");
  }
  if (w_.empty()) {
    w_.assign(count, Rational(1));
  } else if (w_.size() != count) {
    fail(Errc::precondition, "w value count does not match grid");
  }
  for (const Rational& w : w_) {
    if (w < 0) fail(Errc::precondition, "negative measure weight");
  }

  if (edges.empty()) edges.resize(n);
  if (static_cast<int>(edges.size()) != n) {
    fail(Errc::precondition, "edges axis count does not match dimension");
  }
  edges_.resize(n);
  for (int axis = 0; axis < n; ++axis) {
    const Interval& side = domain_.side(axis);
    if (edges[axis].empty()) {
      if (side.is_degenerate()) {
        fail(Errc::precondition, "degenerate domain side");
      }
      edges_[axis] = uniform_breakpoints(side, cells_[axis]);
    } else {
      auto& e = edges[axis];
      if (static_cast<int>(e.size()) != cells_[axis] + 1) {
        fail(Errc::precondition, "edge count does not match cells per axis");
      }
      if (e.front() != side.lo() || e.back() != side.hi()) {
        fail(Errc::precondition, "edges must start and end at the domain side");
      }
      for (std::size_t k = 0; k + 1 < e.size(); ++k) {
        if (!(e[k] < e[k + 1])) {
          fail(Errc::precondition, "edges must be strictly increasing");
        }
      }
      edges_[axis] = std::move(e);
    }
  }

  total_measure_ = 0;
  std::vector<int> idx(n, 0);
  for (std::size_t flat = 0; flat < count; ++flat) {
    Rational vol = 1;
    std::size_t rest = flat;
    for (int axis = n - 1; axis >= 0; --axis) {
      const int i = static_cast<int>(rest % cells_[axis]);
      rest /= cells_[axis];
      vol *= edges_[axis][i + 1] - edges_[axis][i];
    }
    total_measure_ += w_[flat] * vol;
  }
  if (total_measure_.is_zero() && !allow_zero_total_measure) {
    fail(Errc::zero_total_measure, "density has zero total measure");
  }
}

std::size_t GridDensity::flat_index(std::span<const int> cell_index) const {
  std::size_t flat = 0;
  for (int axis = 0; axis < dim(); ++axis) {
    flat = flat * static_cast<std::size_t>(cells_[axis]) +
           static_cast<std::size_t>(cell_index[axis]);
  }
  return flat;
}

Rectangle GridDensity::cell_box(std::span<const int> cell_index) const {
  std::vector<Interval> sides;
  sides.reserve(dim());
  for (int axis = 0; axis < dim(); ++axis) {
    const int i = cell_index[axis];
    sides.emplace_back(edges_[axis][i], edges_[axis][i + 1]);
  }
  return Rectangle(std::move(sides));
}

bool GridDensity::lebesgue_weights() const {
  return std::all_of(w_.begin(), w_.end(),
                     [](const Rational& w) { return w == Rational(1); });
}

bool GridDensity::uniform_edges(int axis) const {
  const auto& e = edges_[axis];
  const Rational step = e[1] - e[0];
  for (std::size_t k = 1; k + 1 < e.size(); ++k) {
    if (e[k + 1] - e[k] != step) return false;
  }
  return true;
}

CumulativeTable::CumulativeTable(const GridDensity& d)
    : density_(&d),
      table_([&d] {
        const std::size_t count = d.cell_count();
        std::vector<Rational> f_mass(count), m_mass(count);
        const int n = d.dim();
        for (std::size_t flat = 0; flat < count; ++flat) {
          Rational vol = 1;
          std::size_t rest = flat;
          for (int axis = n - 1; axis >= 0; --axis) {
            const int i = static_cast<int>(
                rest % static_cast<std::size_t>(d.cells(axis)));
            rest /= static_cast<std::size_t>(d.cells(axis));
            vol *= d.edges(axis)[i + 1] - d.edges(axis)[i];
          }
          m_mass[flat] = d.w(flat) * vol;
          f_mass[flat] = d.f(flat) * m_mass[flat];
        }
        std::vector<std::vector<Rational>> edges;
        edges.reserve(n);
        for (int axis = 0; axis < n; ++axis) edges.push_back(d.edges(axis));
        return detail::PrefixTable<Rational>(std::move(edges), f_mass, m_mass);
      }()) {}

void CumulativeTable::positions(
    const Rectangle& r,
    std::vector<detail::PrefixTable<Rational>::AxisPos>& lo,
    std::vector<detail::PrefixTable<Rational>::AxisPos>& hi) const {
  if (r.dim() != density_->dim() || !density_->domain().contains(r)) {
    fail(Errc::precondition, "rectangle not inside the density domain");
  }
  const int n = r.dim();
  lo.reserve(n);
  hi.reserve(n);
  for (int axis = 0; axis < n; ++axis) {
    lo.push_back(table_.locate(axis, r.side(axis).lo()));
    hi.push_back(table_.locate(axis, r.side(axis).hi()));
  }
}

Rational CumulativeTable::measure(const Rectangle& r) const {
  std::vector<detail::PrefixTable<Rational>::AxisPos> lo, hi;
  positions(r, lo, hi);
  return table_.box_measure(lo, hi);
}

Rational CumulativeTable::integral_f(const Rectangle& r) const {
  std::vector<detail::PrefixTable<Rational>::AxisPos> lo, hi;
  positions(r, lo, hi);
  return table_.box_integral(lo, hi);
}

std::optional<Rational> CumulativeTable::mean(const Rectangle& r) const {
  std::vector<detail::PrefixTable<Rational>::AxisPos> lo, hi;
  positions(r, lo, hi);
  Rational mu = table_.box_measure(lo, hi);
  if (mu.is_zero()) return std::nullopt;
  return table_.box_integral(lo, hi) / mu;
}

namespace detail {

std::vector<std::pair<int, int>> overlapped_cell_ranges(const GridDensity& d,
                                                        const Rectangle& r) {
  std::vector<std::pair<int, int>> ranges;
  ranges.reserve(d.dim());
  for (int axis = 0; axis < d.dim(); ++axis) {
    const Interval& side = r.side(axis);
    if (side.is_degenerate()) {
      ranges.emplace_back(0, 0);
      continue;
    }
    const auto& e = d.edges(axis);
    // first cell k with e[k+1] > lo, last cell k with e[k] < hi
    const auto fit = std::upper_bound(e.begin() + 1, e.end(), side.lo());
    const int first = static_cast<int>(fit - e.begin()) - 1;
    const auto lit = std::lower_bound(e.begin(), e.end() - 1, side.hi());
    const int last = static_cast<int>(lit - e.begin());
    ranges.emplace_back(first, std::max(first, last));
  }
  return ranges;
}

}  // namespace detail

std::optional<Rational> essential_sup_f(const GridDensity& d,
                                        const Rectangle& r) {
  if (r.dim() != d.dim() || !d.domain().contains(r)) {
    fail(Errc::precondition, "rectangle not inside the density domain");
  }
  const auto ranges = detail::overlapped_cell_ranges(d, r);
  const int n = d.dim();
  std::vector<int> idx(n);
  for (int axis = 0; axis < n; ++axis) {
    if (ranges[axis].first >= ranges[axis].second) return std::nullopt;
    idx[axis] = ranges[axis].first;
  }
  std::optional<Rational> best;
  while (true) {
    const std::size_t flat = d.flat_index(idx);
    if (d.w(flat) > 0 && (!best || *best < d.f(flat))) best = d.f(flat);
    int axis = n - 1;
    while (axis >= 0 && ++idx[axis] == ranges[axis].second) {
      idx[axis] = ranges[axis].first;
      --axis;
    }
    if (axis < 0) break;
  }
  return best;
}

}  // namespace rsd
