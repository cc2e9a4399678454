#ifndef RSD_GEOMETRY_HPP
#define RSD_GEOMETRY_HPP

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rsd/rational.hpp"

namespace rsd {

// Half-open interval [lo, hi) with exact rational endpoints, lo <= hi.
class Interval {
 public:
  Interval(Rational lo, Rational hi);

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  Rational length() const { return hi_ - lo_; }
  bool is_degenerate() const { return lo_ == hi_; }
  bool contains(const Rational& x) const { return lo_ <= x && x < hi_; }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  Rational lo_, hi_;
};

// Axis-aligned product of half-open intervals. Immutable after construction.
class Rectangle {
 public:
  explicit Rectangle(std::vector<Interval> sides);

  int dim() const { return static_cast<int>(sides_.size()); }
  const Interval& side(int axis) const { return sides_[axis]; }
  const std::vector<Interval>& sides() const { return sides_; }
  bool is_degenerate() const;

  // Interval-wise containment: other.side ⊆ this->side on every axis.
  bool contains(const Rectangle& other) const;

  friend bool operator==(const Rectangle&, const Rectangle&) = default;

 private:
  std::vector<Interval> sides_;
};

enum class RectRelation {
  disjoint,
  first_inside_second,
  second_inside_first,
  equal,
  proper_overlap,
};

// Product of side lengths, exact.
Rational volume(const Rectangle& rect);

// Index of a side of maximal length; ties broken by smallest axis index.
// Degenerate rectangles are rejected.
int longest_axis(const Rectangle& rect);

// Splits on the given axis at t, lo < t < hi. Returns (lower, upper);
// as point sets lower ∪ upper = rect and lower ∩ upper = ∅.
std::pair<Rectangle, Rectangle> split_at(const Rectangle& rect, int axis,
                                         const Rational& t);

// Classification under half-open semantics: touching closed boundaries
// count as disjoint, degenerate rectangles are disjoint from everything,
// and equality is reported as its own value.
RectRelation relation(const Rectangle& a, const Rectangle& b);

// "[a1,b1)x[a2,b2)x..." with rationals in wire form.
std::string format_rectangle(const Rectangle& rect);
std::optional<Rectangle> parse_rectangle(std::string_view text);

// Smallest rectangle containing every input; rects must be non-empty and
// share a dimension.
Rectangle bounding_box(std::span<const Rectangle> rects);

}  // namespace rsd

#endif
