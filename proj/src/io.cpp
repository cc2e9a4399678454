#include "rsd/io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "rsd/errors.hpp"

namespace rsd {

namespace {

[[noreturn]] void parse_fail(const std::string& what) {
  fail(Errc::parse_error, what);
}

// Whitespace tokens with '#' comments stripped to end of line.
std::vector<std::string> tokenize(std::istream& in) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.push_back(std::move(tok));
  }
  return tokens;
}

class TokenReader {
 public:
  explicit TokenReader(std::vector<std::string> tokens)
      : tokens_(std::move(tokens)) {}

  bool done() const { return pos_ >= tokens_.size(); }
  const std::string& peek() const {
    if (done()) parse_fail("unexpected end of file");
    return tokens_[pos_];
  }
  std::string next() {
    if (done()) parse_fail("unexpected end of file");
    return tokens_[pos_++];
  }
  void expect(const std::string& word) {
    const std::string tok = next();
    if (tok != word) parse_fail("expected '" + word + "', got '" + tok + "'");
  }
  Rational rational() {
    const std::string tok = next();
    auto r = Rational::parse(tok);
    if (!r) parse_fail("invalid rational '" + tok + "'");
    return *r;
  }
  long integer() {
    const std::string tok = next();
    try {
      size_t used = 0;
      const long v = std::stol(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      parse_fail("invalid integer '" + tok + "'");
    }
  }

 private:
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_failure, "cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(Errc::io_failure, "cannot open " + path + " for writing");
  return out;
}

}  // namespace

GridDensity read_density(std::istream& in) {
  TokenReader r(tokenize(in));
  r.expect("RSD");
  r.expect("1");
  r.expect("dim");
  const long n = r.integer();
  if (n < 1 || n > 16) parse_fail("dimension out of range");

  r.expect("rect");
  std::vector<Interval> sides;
  for (long i = 0; i < n; ++i) {
    Rational lo = r.rational();
    Rational hi = r.rational();
    if (hi < lo) parse_fail("rect side with hi < lo");
    sides.emplace_back(std::move(lo), std::move(hi));
  }

  r.expect("cells");
  std::vector<int> cells;
  std::size_t count = 1;
  for (long i = 0; i < n; ++i) {
    const long m = r.integer();
    if (m < 1 || m > 4096) parse_fail("cells per axis out of range");
    cells.push_back(static_cast<int>(m));
    count *= static_cast<std::size_t>(m);
  }

  std::vector<std::vector<Rational>> edges(n);
  while (!r.done() && r.peek() == "edges") {
    r.next();
    const long axis = r.integer();
    if (axis < 0 || axis >= n) parse_fail("edges axis out of range");
    if (!edges[axis].empty()) parse_fail("duplicate edges for one axis");
    std::vector<Rational> e;
    for (int k = 0; k <= cells[axis]; ++k) e.push_back(r.rational());
    edges[axis] = std::move(e);
  }

  r.expect("f");
  std::vector<Rational> f;
  f.reserve(count);
  for (std::size_t i = 0; i < count; ++i) f.push_back(r.rational());

  std::vector<Rational> w;
  if (!r.done() && r.peek() == "w") {
    r.next();
    w.reserve(count);
    for (std::size_t i = 0; i < count; ++i) w.push_back(r.rational());
  }
  if (!r.done()) parse_fail("trailing tokens after density definition");

  try {
    return GridDensity(Rectangle(std::move(sides)), std::move(cells),
                       std::move(f), std::move(w), std::move(edges),
                       /*allow_zero_total_measure=*/true);
  } catch (const Error& e) {
    parse_fail(e.what());
  }
}

GridDensity read_density_file(const std::string& path) {
  auto in = open_input(path);
  return read_density(in);
}

void write_density(std::ostream& out, const GridDensity& d) {
  const int n = d.dim();
  out << "RSD 1\n";
  out << "dim " << n << "\n";
  out << "rect";
  for (int axis = 0; axis < n; ++axis) {
    out << " " << d.domain().side(axis).lo() << " "
        << d.domain().side(axis).hi();
  }
  out << "\n";
  out << "cells";
  for (int axis = 0; axis < n; ++axis) out << " " << d.cells(axis);
  out << "\n";
  for (int axis = 0; axis < n; ++axis) {
    if (d.uniform_edges(axis)) continue;
    out << "edges " << axis;
    for (const Rational& e : d.edges(axis)) out << " " << e;
    out << "\n";
  }

  const int row = d.cells(n - 1);
  const auto write_values = [&](const std::vector<Rational>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      out << values[i];
      out << ((static_cast<int>(i) % row == row - 1) ? "\n" : " ");
    }
  };
  out << "f\n";
  write_values(d.f_values());
  if (!d.lebesgue_weights()) {
    out << "w\n";
    write_values(d.w_values());
  }
}

void write_density_file(const std::string& path, const GridDensity& d) {
  auto out = open_output(path);
  write_density(out, d);
}

std::string to_string(LeafReason reason) {
  switch (reason) {
    case LeafReason::below_level: return "below-level";
    case LeafReason::zero_measure: return "zero-measure";
    case LeafReason::resolution_limit: return "resolution-limit";
  }
  fail(Errc::internal_invariant, "unknown leaf reason");
}

namespace {

LeafReason parse_reason(const std::string& s) {
  if (s == "below-level") return LeafReason::below_level;
  if (s == "zero-measure") return LeafReason::zero_measure;
  if (s == "resolution-limit") return LeafReason::resolution_limit;
  parse_fail("unknown residual reason '" + s + "'");
}

// "key=value" payload of a token, after checking the key.
std::string field(const std::string& token, const std::string& key) {
  const std::string prefix = key + "=";
  if (token.rfind(prefix, 0) != 0) {
    parse_fail("expected '" + key + "=...', got '" + token + "'");
  }
  return token.substr(prefix.size());
}

Rational parse_rational_or_fail(const std::string& s) {
  auto r = Rational::parse(s);
  if (!r) parse_fail("invalid rational '" + s + "'");
  return *r;
}

std::optional<Rational> parse_mean(const std::string& s) {
  if (s == "undefined") return std::nullopt;
  return parse_rational_or_fail(s);
}

Rectangle parse_rect_or_fail(const std::string& s) {
  auto r = parse_rectangle(s);
  if (!r) parse_fail("invalid rectangle '" + s + "'");
  return *r;
}

long parse_int_or_fail(const std::string& s) {
  try {
    size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    parse_fail("invalid integer '" + s + "'");
  }
}

void write_node(std::ostream& out, const DivisionNode& node) {
  out << "node depth=" << node.depth << " " << format_rectangle(node.rect)
      << " mean=" << (node.mean ? node.mean->str() : "undefined")
      << " outcome=";
  if (const auto* split = std::get_if<SplitBoth>(&node.outcome)) {
    out << "split axis=" << split->axis << " mid=" << split->midpoint << "\n";
    write_node(out, *split->lower);
    write_node(out, *split->upper);
  } else if (const auto* cut = std::get_if<CutSelected>(&node.outcome)) {
    out << "cut axis=" << cut->axis << " t=" << cut->cut << " grow="
        << (cut->grow == GrowSide::lower ? "lower" : "upper") << "\n";
    write_node(out, *cut->selected_child);
    write_node(out, *cut->continuing_child);
  } else if (std::holds_alternative<SelectedWhole>(node.outcome)) {
    out << "selected\n";
  } else {
    out << "residual reason="
        << to_string(std::get<ResidualLeaf>(node.outcome).reason) << "\n";
  }
}

// Attaches a parsed node under the preorder parent, filling its first
// empty child slot.
void attach_child(DivisionNode* parent, std::unique_ptr<DivisionNode> child) {
  if (auto* split = std::get_if<SplitBoth>(&parent->outcome)) {
    auto& slot = !split->lower ? split->lower : split->upper;
    if (slot) parse_fail("tree node has too many children");
    slot = std::move(child);
    return;
  }
  if (auto* cut = std::get_if<CutSelected>(&parent->outcome)) {
    auto& slot = !cut->selected_child ? cut->selected_child
                                      : cut->continuing_child;
    if (slot) parse_fail("tree node has too many children");
    slot = std::move(child);
    return;
  }
  parse_fail("tree node child under a leaf");
}

}  // namespace

void write_decomposition(std::ostream& out, const Decomposition& dec,
                         bool dump_tree) {
  out << "RSDEC 1\n";
  out << "level " << dec.level.value << "\n";
  out << "complete " << (dec.complete ? "true" : "false") << "\n";
  for (const SelectedRect& s : dec.selected) {
    out << "select " << format_rectangle(s.rect) << " mean=" << s.mean
        << " depth=" << s.depth << "\n";
  }
  for (const auto& [rect, reason] : dec.residual_leaves) {
    out << "residual " << format_rectangle(rect)
        << " reason=" << to_string(reason) << "\n";
  }
  if (dump_tree && dec.root) write_node(out, *dec.root);
}

void write_decomposition_file(const std::string& path, const Decomposition& dec,
                              bool dump_tree) {
  auto out = open_output(path);
  write_decomposition(out, dec, dump_tree);
}

Decomposition read_decomposition(std::istream& in) {
  TokenReader r(tokenize(in));
  r.expect("RSDEC");
  r.expect("1");
  r.expect("level");
  Decomposition dec;
  dec.level.value = r.rational();
  r.expect("complete");
  {
    const std::string flag = r.next();
    if (flag != "true" && flag != "false") {
      parse_fail("complete must be true or false");
    }
    dec.complete = flag == "true";
  }

  std::vector<DivisionNode*> depth_stack;
  while (!r.done()) {
    const std::string kind = r.next();
    if (kind == "select") {
      Rectangle rect = parse_rect_or_fail(r.next());
      Rational mean = parse_rational_or_fail(field(r.next(), "mean"));
      const int depth =
          static_cast<int>(parse_int_or_fail(field(r.next(), "depth")));
      dec.selected.push_back({std::move(rect), std::move(mean), depth});
    } else if (kind == "residual") {
      Rectangle rect = parse_rect_or_fail(r.next());
      LeafReason reason = parse_reason(field(r.next(), "reason"));
      dec.residual_leaves.emplace_back(std::move(rect), reason);
    } else if (kind == "node") {
      const int depth =
          static_cast<int>(parse_int_or_fail(field(r.next(), "depth")));
      auto node =
          std::make_unique<DivisionNode>(parse_rect_or_fail(r.next()), depth);
      node->mean = parse_mean(field(r.next(), "mean"));
      const std::string outcome = field(r.next(), "outcome");
      if (outcome == "split") {
        const int axis =
            static_cast<int>(parse_int_or_fail(field(r.next(), "axis")));
        Rational mid = parse_rational_or_fail(field(r.next(), "mid"));
        node->outcome = SplitBoth{axis, std::move(mid), nullptr, nullptr};
      } else if (outcome == "cut") {
        const int axis =
            static_cast<int>(parse_int_or_fail(field(r.next(), "axis")));
        Rational t = parse_rational_or_fail(field(r.next(), "t"));
        const std::string grow = field(r.next(), "grow");
        if (grow != "lower" && grow != "upper") {
          parse_fail("grow must be lower or upper");
        }
        node->outcome = CutSelected{
            axis, std::move(t),
            grow == "lower" ? GrowSide::lower : GrowSide::upper, nullptr,
            nullptr};
      } else if (outcome == "selected") {
        node->outcome = SelectedWhole{};
      } else if (outcome == "residual") {
        node->outcome = ResidualLeaf{parse_reason(field(r.next(), "reason"))};
      } else {
        parse_fail("unknown node outcome '" + outcome + "'");
      }

      if (depth < 0 || depth > static_cast<int>(depth_stack.size())) {
        parse_fail("tree node depth out of preorder sequence");
      }
      depth_stack.resize(depth);
      DivisionNode* raw = node.get();
      if (depth == 0) {
        if (dec.root) parse_fail("multiple tree roots");
        dec.root = std::move(node);
      } else {
        attach_child(depth_stack[depth - 1], std::move(node));
      }
      depth_stack.push_back(raw);
    } else {
      parse_fail("unknown line kind '" + kind + "'");
    }
  }
  return dec;
}

Decomposition read_decomposition_file(const std::string& path) {
  auto in = open_input(path);
  return read_decomposition(in);
}

}  // namespace rsd
