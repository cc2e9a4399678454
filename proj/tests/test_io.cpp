#include "rsd/io.hpp"

#include <doctest.h>

#include <sstream>

#include "rsd/errors.hpp"
#include "rsd/generate.hpp"

using namespace rsd;

namespace {

GridDensity parse(const std::string& text) {
  std::istringstream in(text);
  return read_density(in);
}

std::string serialize(const GridDensity& d) {
  std::ostringstream out;
  write_density(out, d);
  return out.str();
}

StoppingPolicy depth_policy(int depth) {
  StoppingPolicy p;
  p.max_depth = depth;
  return p;
}

}  // namespace

TEST_CASE("density write-read round trip") {
  for (const GridDensity& d :
       {paper_counterexample(), riesz_step_1d(), random_density(5),
        random_density(12), random_density(77)}) {
    const std::string text = serialize(d);
    CHECK(parse(text) == d);
    // Canonical writing is idempotent.
    CHECK(serialize(parse(text)) == text);
  }
}

TEST_CASE("density parsing tolerates comments and free whitespace") {
  const GridDensity d = parse(
      "# counterexample fixture\n"
      "RSD 1\n"
      "dim 2  # two dimensions\n"
      "rect 0 1  0 1\n"
      "cells 2 2\n"
      "f 1 1\n"
      "  1 0\n");
  CHECK(d == paper_counterexample());
}

TEST_CASE("density parsing handles explicit edges and weights") {
  const GridDensity d = parse(
      "RSD 1\n"
      "dim 1\n"
      "rect 0 1\n"
      "cells 2\n"
      "edges 0 0 1/3 1\n"
      "f 2 0\n"
      "w 1 3/2\n");
  CHECK(d.edges(0)[1] == Rational(1, 3));
  CHECK(d.w(1) == Rational(3, 2));
  CHECK(!d.uniform_edges(0));
  CHECK(parse(serialize(d)) == d);
}

TEST_CASE("density parse errors") {
  CHECK_THROWS_AS(parse(""), Error);
  CHECK_THROWS_AS(parse("RSX 1\ndim 1\nrect 0 1\ncells 1\nf 1\n"), Error);
  CHECK_THROWS_AS(parse("RSD 2\ndim 1\nrect 0 1\ncells 1\nf 1\n"), Error);
  CHECK_THROWS_AS(parse("RSD 1\ndim 0\nrect\ncells\nf\n"), Error);
  CHECK_THROWS_AS(parse("RSD 1\ndim 1\nrect 1 0\ncells 1\nf 1\n"), Error);
  CHECK_THROWS_AS(parse("RSD 1\ndim 1\nrect 0 1\ncells 1\nf 1/0\n"), Error);
  CHECK_THROWS_AS(parse("RSD 1\ndim 1\nrect 0 1\ncells 2\nf 1\n"), Error);
  CHECK_THROWS_AS(parse("RSD 1\ndim 1\nrect 0 1\ncells 1\nf 1\nextra\n"),
                  Error);
  // Non-increasing explicit edges.
  CHECK_THROWS_AS(
      parse("RSD 1\ndim 1\nrect 0 1\ncells 2\nedges 0 0 0 1\nf 1 1\n"), Error);
  // Edge list must span the domain side.
  CHECK_THROWS_AS(
      parse("RSD 1\ndim 1\nrect 0 1\ncells 2\nedges 0 0 1/2 2\nf 1 1\n"),
      Error);
  CHECK_THROWS_AS(parse("RSD 1\ndim 1\nrect 0 1\ncells 2\n"
                        "edges 0 0 1/2 1\nedges 0 0 1/3 1\nf 1 1\n"),
                  Error);
}

TEST_CASE("missing files raise io errors") {
  CHECK_THROWS_AS(read_density_file("/nonexistent/definitely-missing.rsd"),
                  Error);
}

TEST_CASE("decomposition write-read round trip with tree") {
  const GridDensity d = paper_counterexample();
  const Decomposition dec =
      rising_sun_decompose(d, Level{Rational(7, 8)}, depth_policy(16));

  std::ostringstream out;
  write_decomposition(out, dec, /*dump_tree=*/true);
  std::istringstream in(out.str());
  const Decomposition back = read_decomposition(in);

  CHECK(back.level.value == dec.level.value);
  CHECK(back.complete == dec.complete);
  REQUIRE(back.selected.size() == dec.selected.size());
  for (std::size_t i = 0; i < dec.selected.size(); ++i) {
    CHECK(back.selected[i].rect == dec.selected[i].rect);
    CHECK(back.selected[i].mean == dec.selected[i].mean);
    CHECK(back.selected[i].depth == dec.selected[i].depth);
  }
  CHECK(back.residual_leaves == dec.residual_leaves);
  REQUIRE(back.root);

  // Reserializing the parsed tree reproduces the bytes exactly.
  std::ostringstream again;
  write_decomposition(again, back, /*dump_tree=*/true);
  CHECK(again.str() == out.str());
}

TEST_CASE("decomposition without tree dump parses with a null root") {
  const GridDensity d = paper_counterexample();
  const Decomposition dec =
      rising_sun_decompose(d, Level{Rational(7, 8)}, depth_policy(16));
  std::ostringstream out;
  write_decomposition(out, dec, /*dump_tree=*/false);
  CHECK(out.str().find("node") == std::string::npos);
  std::istringstream in(out.str());
  const Decomposition back = read_decomposition(in);
  CHECK(!back.root);
  CHECK(back.selected.size() == 2);
}

TEST_CASE("decomposition parse errors") {
  const auto bad = [](const std::string& text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(read_decomposition(in), Error);
  };
  bad("");
  bad("RSDEC 2\nlevel 1\ncomplete true\n");
  bad("RSDEC 1\nlevel x\ncomplete true\n");
  bad("RSDEC 1\nlevel 1\ncomplete maybe\n");
  bad("RSDEC 1\nlevel 1\ncomplete true\nselect [0,1) mean=1\n");
  bad("RSDEC 1\nlevel 1\ncomplete true\nresidual [0,1) reason=tired\n");
  bad("RSDEC 1\nlevel 1\ncomplete true\nnode depth=1 [0,1) mean=1 "
      "outcome=selected\n");  // no parent at depth 0
  bad("RSDEC 1\nlevel 1\ncomplete true\nwhatever\n");
}

TEST_CASE("leaf reason strings") {
  CHECK(to_string(LeafReason::below_level) == "below-level");
  CHECK(to_string(LeafReason::zero_measure) == "zero-measure");
  CHECK(to_string(LeafReason::resolution_limit) == "resolution-limit");
}
