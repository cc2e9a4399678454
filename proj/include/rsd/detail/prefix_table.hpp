#ifndef RSD_DETAIL_PREFIX_TABLE_HPP
#define RSD_DETAIL_PREFIX_TABLE_HPP

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace rsd::detail {

// n-dimensional prefix sums of per-cell masses, evaluable at arbitrary
// (non-grid) points. The continuous cumulative function of a
// piecewise-constant density is multilinear inside each cell, so per-axis
// linear interpolation of the corner values is exact, not approximate.
//
// S is the scalar: exact rationals for the authoritative mode, double for
// the floating-point mirror.
template <class S>
class PrefixTable {
 public:
  // edges: per axis, m_i + 1 strictly increasing breakpoints.
  // f_mass/m_mass: per-cell masses (f*w*vol and w*vol), row-major with the
  // last axis fastest.
  PrefixTable(std::vector<std::vector<S>> edges, const std::vector<S>& f_mass,
              const std::vector<S>& m_mass)
      : edges_(std::move(edges)), n_(static_cast<int>(edges_.size())) {
    stride_.assign(n_, 1);
    std::size_t size = 1;
    for (int axis = n_ - 1; axis >= 0; --axis) {
      stride_[axis] = size;
      size *= edges_[axis].size();
    }
    F_ = build(f_mass, size);
    M_ = build(m_mass, size);
  }

  int dim() const { return n_; }
  const std::vector<S>& edges(int axis) const { return edges_[axis]; }

  // Position of coordinate x along an axis: the containing cell and the
  // fractional offset inside it. Requires edges.front() <= x <= edges.back().
  struct AxisPos {
    std::size_t cell;
    S frac;
  };

  AxisPos locate(int axis, const S& x) const {
    const auto& e = edges_[axis];
    const std::size_t cells = e.size() - 1;
    auto it = std::upper_bound(e.begin(), e.end(), x);
    std::size_t cell = static_cast<std::size_t>(it - e.begin());
    cell = cell == 0 ? 0 : cell - 1;
    if (cell >= cells) cell = cells - 1;
    S frac = (x - e[cell]) / (e[cell + 1] - e[cell]);
    return {cell, std::move(frac)};
  }

  // ∫ over the box between the located corners, by per-axis differencing of
  // the interpolated cumulative function (equivalent to the 2^n-corner
  // inclusion–exclusion, with exact short-circuits at frac 0 and 1).
  S box_integral(std::span<const AxisPos> lo, std::span<const AxisPos> hi) const {
    return box_sum(F_, lo, hi, 0, 0);
  }
  S box_measure(std::span<const AxisPos> lo, std::span<const AxisPos> hi) const {
    return box_sum(M_, lo, hi, 0, 0);
  }

  // Raw table values at a grid index (for tests and debugging).
  const S& f_at(std::span<const std::size_t> idx) const { return F_[offset(idx)]; }
  const S& m_at(std::span<const std::size_t> idx) const { return M_[offset(idx)]; }

 private:
  std::vector<S> build(const std::vector<S>& mass, std::size_t size) const {
    std::vector<S> t(size, S(0));
    // Scatter each cell mass to the grid node one past the cell on every
    // axis, then prefix-sum along each axis in turn.
    std::vector<std::size_t> cell_stride(n_, 1);
    for (int axis = n_ - 2; axis >= 0; --axis) {
      cell_stride[axis] =
          cell_stride[axis + 1] * (edges_[axis + 1].size() - 1);
    }
    for (std::size_t c = 0; c < mass.size(); ++c) {
      std::size_t off = 0;
      std::size_t rest = c;
      for (int axis = 0; axis < n_; ++axis) {
        const std::size_t i = rest / cell_stride[axis];
        rest %= cell_stride[axis];
        off += (i + 1) * stride_[axis];
      }
      t[off] = mass[c];
    }
    for (int axis = 0; axis < n_; ++axis) {
      const std::size_t extent = edges_[axis].size();
      for (std::size_t i = 0; i < t.size(); ++i) {
        if ((i / stride_[axis]) % extent > 0) t[i] += t[i - stride_[axis]];
      }
    }
    return t;
  }

  std::size_t offset(std::span<const std::size_t> idx) const {
    std::size_t off = 0;
    for (int axis = 0; axis < n_; ++axis) off += idx[axis] * stride_[axis];
    return off;
  }

  S box_sum(const std::vector<S>& t, std::span<const PrefixTable::AxisPos> lo,
            std::span<const PrefixTable::AxisPos> hi, int axis,
            std::size_t off) const {
    if (axis == n_) return t[off];
    return interp(t, lo, hi, axis, off, hi[axis]) -
           interp(t, lo, hi, axis, off, lo[axis]);
  }

  S interp(const std::vector<S>& t, std::span<const AxisPos> lo,
           std::span<const AxisPos> hi, int axis, std::size_t off,
           const AxisPos& p) const {
    const std::size_t base = off + p.cell * stride_[axis];
    if (p.frac == S(0)) return box_sum(t, lo, hi, axis + 1, base);
    if (p.frac == S(1)) return box_sum(t, lo, hi, axis + 1, base + stride_[axis]);
    S a = box_sum(t, lo, hi, axis + 1, base);
    S b = box_sum(t, lo, hi, axis + 1, base + stride_[axis]);
    return a + p.frac * (b - a);
  }

  std::vector<std::vector<S>> edges_;
  int n_;
  std::vector<std::size_t> stride_;
  std::vector<S> F_, M_;
};

}  // namespace rsd::detail

#endif
