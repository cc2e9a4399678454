#include "rsd/geometry.hpp"

#include <sstream>

#include "rsd/errors.hpp"

namespace rsd {

Interval::Interval(Rational lo, Rational hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (hi_ < lo_) fail(Errc::precondition, "interval with hi < lo");
}

Rectangle::Rectangle(std::vector<Interval> sides) : sides_(std::move(sides)) {
  if (sides_.empty()) fail(Errc::precondition, "rectangle needs dimension >= 1");
}

bool Rectangle::is_degenerate() const {
  for (const auto& s : sides_) {
    if (s.is_degenerate()) return true;
  }
  return false;
}

bool Rectangle::contains(const Rectangle& other) const {
  if (other.dim() != dim()) {
    fail(Errc::precondition, "dimension mismatch in containment check");
  }
  for (int i = 0; i < dim(); ++i) {
    if (other.sides_[i].lo() < sides_[i].lo() ||
        sides_[i].hi() < other.sides_[i].hi()) {
      return false;
    }
  }
  return true;
}

Rational volume(const Rectangle& rect) {
  Rational v = 1;
  for (const auto& s : rect.sides()) v *= s.length();
  return v;
}

int longest_axis(const Rectangle& rect) {
  if (rect.is_degenerate()) {
    fail(Errc::precondition, "longest_axis of a degenerate rectangle");
  }
  int best = 0;
  for (int i = 1; i < rect.dim(); ++i) {
    if (rect.side(best).length() < rect.side(i).length()) best = i;
  }
  return best;
}

std::pair<Rectangle, Rectangle> split_at(const Rectangle& rect, int axis,
                                         const Rational& t) {
  if (axis < 0 || axis >= rect.dim()) {
    fail(Errc::precondition, "split axis out of range");
  }
  const Interval& s = rect.side(axis);
  if (!(s.lo() < t && t < s.hi())) {
    fail(Errc::precondition, "split position not strictly inside the side");
  }
  std::vector<Interval> lower = rect.sides();
  std::vector<Interval> upper = rect.sides();
  lower[axis] = Interval(s.lo(), t);
  upper[axis] = Interval(t, s.hi());
  return {Rectangle(std::move(lower)), Rectangle(std::move(upper))};
}

RectRelation relation(const Rectangle& a, const Rectangle& b) {
  if (a.dim() != b.dim()) {
    fail(Errc::precondition, "dimension mismatch in relation");
  }
  if (a.is_degenerate() || b.is_degenerate()) return RectRelation::disjoint;

  bool a_in_b = true;
  bool b_in_a = true;
  bool intersect = true;
  for (int i = 0; i < a.dim(); ++i) {
    const Interval& sa = a.side(i);
    const Interval& sb = b.side(i);
    if (sa.lo() < sb.lo() || sb.hi() < sa.hi()) a_in_b = false;
    if (sb.lo() < sa.lo() || sa.hi() < sb.hi()) b_in_a = false;
    if (max(sa.lo(), sb.lo()) >= min(sa.hi(), sb.hi())) intersect = false;
  }
  if (a_in_b && b_in_a) return RectRelation::equal;
  if (a_in_b) return RectRelation::first_inside_second;
  if (b_in_a) return RectRelation::second_inside_first;
  return intersect ? RectRelation::proper_overlap : RectRelation::disjoint;
}

std::string format_rectangle(const Rectangle& rect) {
  std::string out;
  for (int i = 0; i < rect.dim(); ++i) {
    if (i > 0) out += "x";
    out += "[" + rect.side(i).lo().str() + "," + rect.side(i).hi().str() + ")";
  }
  return out;
}

std::optional<Rectangle> parse_rectangle(std::string_view text) {
  std::vector<Interval> sides;
  size_t pos = 0;
  while (pos < text.size()) {
    if (!sides.empty()) {
      if (text[pos] != 'x') return std::nullopt;
      ++pos;
    }
    if (pos >= text.size() || text[pos] != '[') return std::nullopt;
    const auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) return std::nullopt;
    const auto close = text.find(')', comma);
    if (close == std::string_view::npos) return std::nullopt;
    auto lo = Rational::parse(text.substr(pos + 1, comma - pos - 1));
    auto hi = Rational::parse(text.substr(comma + 1, close - comma - 1));
    if (!lo || !hi || *hi < *lo) return std::nullopt;
    sides.emplace_back(std::move(*lo), std::move(*hi));
    pos = close + 1;
  }
  if (sides.empty()) return std::nullopt;
  return Rectangle(std::move(sides));
}

Rectangle bounding_box(std::span<const Rectangle> rects) {
  if (rects.empty()) {
    fail(Errc::precondition, "bounding box of an empty family");
  }
  std::vector<Interval> sides = rects.front().sides();
  for (const Rectangle& r : rects.subspan(1)) {
    if (r.dim() != static_cast<int>(sides.size())) {
      fail(Errc::precondition, "dimension mismatch in bounding box");
    }
    for (int i = 0; i < r.dim(); ++i) {
      sides[i] = Interval(min(sides[i].lo(), r.side(i).lo()),
                          max(sides[i].hi(), r.side(i).hi()));
    }
  }
  return Rectangle(std::move(sides));
}

}  // namespace rsd
