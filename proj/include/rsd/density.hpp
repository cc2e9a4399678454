#ifndef RSD_DENSITY_HPP
#define RSD_DENSITY_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rsd/detail/prefix_table.hpp"
#include "rsd/geometry.hpp"
#include "rsd/rational.hpp"

namespace rsd {

// Piecewise-constant f and measure weight w on a cell grid over the domain
// rectangle. dμ = w·dx. Values are stored row-major with the last axis
// fastest. Immutable after construction.
class GridDensity {
 public:
  // w_values empty means w ≡ 1; edges empty (or empty per axis) means
  // uniform breakpoints. A total measure of zero is rejected unless the
  // caller explicitly permits it.
  GridDensity(Rectangle domain, std::vector<int> cells_per_axis,
              std::vector<Rational> f_values,
              std::vector<Rational> w_values = {},
              std::vector<std::vector<Rational>> edges = {},
              bool allow_zero_total_measure = false);

  int dim() const { return domain_.dim(); }
  const Rectangle& domain() const { return domain_; }
  const std::vector<int>& cells_per_axis() const { return cells_; }
  int cells(int axis) const { return cells_[axis]; }
  std::size_t cell_count() const { return f_.size(); }
  const std::vector<Rational>& edges(int axis) const { return edges_[axis]; }
  const std::vector<Rational>& f_values() const { return f_; }
  const std::vector<Rational>& w_values() const { return w_; }
  const Rational& f(std::size_t flat) const { return f_[flat]; }
  const Rational& w(std::size_t flat) const { return w_[flat]; }

  std::size_t flat_index(std::span<const int> cell_index) const;
  Rectangle cell_box(std::span<const int> cell_index) const;

  const Rational& total_measure() const { return total_measure_; }
  bool lebesgue_weights() const;  // w ≡ 1
  bool uniform_edges(int axis) const;

  friend bool operator==(const GridDensity&, const GridDensity&) = default;

 private:
  Rectangle domain_;
  std::vector<int> cells_;
  std::vector<std::vector<Rational>> edges_;
  std::vector<Rational> f_, w_;
  Rational total_measure_;
};

// Exact n-D prefix sums of ∫f dμ and μ over the density's grid, evaluable
// at arbitrary rational points via the 2^n-corner scheme. Keeps a
// back-reference to the source density, which must outlive the table.
class CumulativeTable {
 public:
  explicit CumulativeTable(const GridDensity& d);

  const GridDensity& density() const { return *density_; }

  // Exact μ(r) and ∫_r f dμ; r must lie inside the domain.
  Rational measure(const Rectangle& r) const;
  Rational integral_f(const Rectangle& r) const;

  // integral_f / measure, or nullopt when the measure is zero.
  std::optional<Rational> mean(const Rectangle& r) const;

  // Raw prefix values at a grid node, F[idx] = ∫_{[lo, edge(idx))} f dμ.
  const Rational& f_at(std::span<const std::size_t> idx) const {
    return table_.f_at(idx);
  }
  const Rational& m_at(std::span<const std::size_t> idx) const {
    return table_.m_at(idx);
  }

  const detail::PrefixTable<Rational>& raw() const { return table_; }

 private:
  void positions(const Rectangle& r,
                 std::vector<detail::PrefixTable<Rational>::AxisPos>& lo,
                 std::vector<detail::PrefixTable<Rational>::AxisPos>& hi) const;

  const GridDensity* density_;
  detail::PrefixTable<Rational> table_;
};

inline CumulativeTable build_tables(const GridDensity& d) {
  return CumulativeTable(d);
}

// μ-essential supremum of f on r: the maximum of f over cells whose
// intersection with r has positive μ-mass; nullopt when no such cell.
std::optional<Rational> essential_sup_f(const GridDensity& d,
                                        const Rectangle& r);

namespace detail {
// Per-axis ranges [first, last) of cells whose overlap with r has positive
// volume. Empty when r is degenerate on some axis.
std::vector<std::pair<int, int>> overlapped_cell_ranges(const GridDensity& d,
                                                        const Rectangle& r);
}  // namespace detail

}  // namespace rsd

#endif
