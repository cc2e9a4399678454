#include "rsd/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "rsd/decompose.hpp"
#include "rsd/generate.hpp"
#include "rsd/io.hpp"
#include "rsd/render.hpp"
#include "rsd/verify.hpp"

namespace rsd::cli {

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::io_failure: return exit_io;
    case Errc::parse_error: return exit_parse;
    case Errc::level_below_mean: return exit_level_below_mean;
    case Errc::zero_total_measure: return exit_zero_measure;
    case Errc::domain_mismatch: return exit_domain_mismatch;
    case Errc::non_cube_domain: return exit_non_cube;
    case Errc::negative_values: return exit_negative_values;
    case Errc::non_lebesgue_weights: return exit_non_lebesgue;
    case Errc::unknown_preset: return exit_unknown_preset;
    case Errc::unsupported_dimension: return exit_unsupported_dimension;
    case Errc::invalid_policy: return exit_usage;
    case Errc::precondition:
    case Errc::internal_invariant: return exit_internal;
  }
  return exit_internal;
}

namespace {

struct Options {
  std::string input;
  std::string decomposition;
  std::string output = "-";
  std::string level;
  std::string mode = "exact";
  std::string min_side;
  int max_depth = 64;
  long max_select = 0;  // 0 = unlimited
  std::uint64_t seed = 0;
  std::string preset;
  int dim = 0;
  std::string tolerance;
  int svg_width = 800;
  int svg_height = 600;
  std::string color_by = "kind";
  bool dump_tree = false;
};

Rational parse_level(const std::string& text) {
  auto r = Rational::parse(text);
  if (!r) fail(Errc::parse_error, "level must be an exact rational: " + text);
  return *r;
}

StoppingPolicy make_policy(const Options& o) {
  StoppingPolicy policy;
  if (!o.min_side.empty()) {
    auto r = Rational::parse(o.min_side);
    if (!r || *r < 0) {
      fail(Errc::invalid_policy, "min-side must be a rational >= 0");
    }
    policy.min_side = *r;
  }
  if (o.max_depth > 0) policy.max_depth = o.max_depth;
  if (o.max_select > 0) policy.max_selected = o.max_select;
  policy.validate();
  return policy;
}

Mode parse_mode(const std::string& mode) {
  if (mode == "exact") return Mode::exact;
  if (mode == "float") return Mode::floating;
  fail(Errc::invalid_policy, "mode must be exact or float");
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) fail(Errc::io_failure, "cannot open " + path + " for writing");
  out << text;
}

int cmd_decompose(const Options& o) {
  const GridDensity density = read_density_file(o.input);
  const Level level{parse_level(o.level)};
  const StoppingPolicy policy = make_policy(o);
  const Mode mode = parse_mode(o.mode);

  const Decomposition dec =
      rising_sun_decompose(density, level, policy, mode);
  std::ostringstream os;
  write_decomposition(os, dec, o.dump_tree);
  write_text(o.output, os.str());
  std::cerr << "decompose: " << dec.selected.size() << " selected, "
            << dec.residual_leaves.size() << " residual leaves, "
            << (dec.complete ? "complete" : "truncated") << "\n";
  return exit_ok;
}

int cmd_verify(const Options& o) {
  const GridDensity density = read_density_file(o.input);
  const Decomposition dec = read_decomposition_file(o.decomposition);

  std::vector<Rectangle> all;
  for (const SelectedRect& s : dec.selected) all.push_back(s.rect);
  for (const auto& [rect, reason] : dec.residual_leaves) all.push_back(rect);
  for (const Rectangle& r : all) {
    if (r.dim() != density.dim() || !density.domain().contains(r)) {
      fail(Errc::domain_mismatch,
           "decomposition rectangle outside the density domain: " +
               format_rectangle(r));
    }
  }
  if (!dec.residual_leaves.empty() &&
      bounding_box(all) != density.domain()) {
    fail(Errc::domain_mismatch,
         "decomposition does not tile the density domain");
  }

  Rational tolerance(0);
  if (!o.tolerance.empty()) {
    auto t = Rational::parse_number(o.tolerance);
    if (!t || *t < 0) {
      fail(Errc::invalid_policy, "tolerance must be a number >= 0");
    }
    tolerance = *t;
  } else if (parse_mode(o.mode) == Mode::floating) {
    tolerance = Rational(1, 1000000000);
  }

  const VerificationReport report =
      verify_decomposition(density, dec, tolerance);
  std::cout << report.render();
  return report.all_pass() ? exit_ok : exit_verification_failed;
}

int cmd_cz(const Options& o) {
  const GridDensity density = read_density_file(o.input);
  const Level level{parse_level(o.level)};
  const StoppingPolicy policy = make_policy(o);

  const std::vector<CzCube> cubes = cz_decompose(density, level, policy);
  const Decomposition rs = rising_sun_decompose(density, level, policy);

  mpz_class two_n;
  mpz_ui_pow_ui(two_n.get_mpz_t(), 2,
                static_cast<unsigned long>(density.dim()));
  const Rational upper = Rational(mpq_class(two_n)) * level.value;

  std::ostringstream side_by_side;
  side_by_side << "Calderon-Zygmund cubes, means in (" << level.value << ", "
               << upper << "]:\n";
  if (cubes.empty()) side_by_side << "  (none selected)\n";
  for (const CzCube& c : cubes) {
    side_by_side << "  cube " << format_rectangle(c.cube)
                 << " mean=" << c.mean << "\n";
  }
  side_by_side << "Rising-sun rectangles, means exactly " << level.value
               << ":\n";
  if (rs.selected.empty()) side_by_side << "  (none selected)\n";
  for (const SelectedRect& s : rs.selected) {
    side_by_side << "  select " << format_rectangle(s.rect)
                 << " mean=" << s.mean << "\n";
  }
  std::cout << side_by_side.str();

  if (o.output != "-") {
    std::ostringstream os;
    os << "RSCZ 1\n";
    os << "level " << level.value << "\n";
    for (const CzCube& c : cubes) {
      os << "cube " << format_rectangle(c.cube) << " mean=" << c.mean
         << " depth=" << c.depth << "\n";
    }
    write_text(o.output, os.str());
  }
  return exit_ok;
}

int cmd_gen(const Options& o) {
  std::optional<GridDensity> density;
  if (o.preset == "paper-counterexample") {
    density = paper_counterexample();
  } else if (o.preset == "riesz-1d-step") {
    density = riesz_step_1d();
  } else if (o.preset == "random") {
    if (o.dim < 0 || o.dim > 3) {
      fail(Errc::invalid_policy, "random preset supports --dim 1..3");
    }
    RandomDensityOptions ropt;
    ropt.dim = o.dim;
    density = random_density(o.seed, ropt);
  } else {
    fail(Errc::unknown_preset, "unknown preset '" + o.preset + "'");
  }
  std::ostringstream os;
  write_density(os, *density);
  write_text(o.output, os.str());
  return exit_ok;
}

int cmd_render(const Options& o) {
  const Decomposition dec = read_decomposition_file(o.input);
  RenderOptions ropt;
  ropt.width = o.svg_width;
  ropt.height = o.svg_height;
  if (o.color_by == "depth") {
    ropt.color_by = RenderOptions::ColorBy::depth;
  } else if (o.color_by != "kind") {
    fail(Errc::invalid_policy, "color-by must be kind or depth");
  }
  write_text(o.output, render_svg(dec, ropt));
  return exit_ok;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Exact rising-sun decompositions of grid densities"};
  app.require_subcommand(1);
  Options o;

  auto* dec = app.add_subcommand(
      "decompose", "Rising-sun decomposition of a density at a level");
  dec->add_option("--input", o.input, "density file (RSD 1)")->required();
  dec->add_option("--output", o.output, "decomposition file, - for stdout");
  dec->add_option("--level", o.level, "level A as an exact rational p/q")
      ->required();
  dec->add_option("--mode", o.mode, "exact (default) or float");
  dec->add_option("--min-side", o.min_side, "stop before sides get smaller");
  dec->add_option("--max-depth", o.max_depth,
                  "division depth limit, 0 for unlimited (default 64)");
  dec->add_option("--max-select", o.max_select,
                  "selection budget, 0 for unlimited");
  dec->add_flag("--dump-tree", o.dump_tree, "append the full division tree");

  auto* ver = app.add_subcommand(
      "verify", "Check a decomposition against its density");
  ver->add_option("--input", o.input, "density file (RSD 1)")->required();
  ver->add_option("--decomposition", o.decomposition,
                  "decomposition file (RSDEC 1)")
      ->required();
  ver->add_option("--mode", o.mode, "exact (default) or float");
  ver->add_option("--tolerance", o.tolerance,
                  "relative mean tolerance (default 0 exact, 1e-9 float)");

  auto* cz = app.add_subcommand(
      "cz", "Calderon-Zygmund cube baseline, side by side with rising-sun");
  cz->add_option("--input", o.input, "density file (RSD 1)")->required();
  cz->add_option("--output", o.output, "cube list file");
  cz->add_option("--level", o.level, "level A as an exact rational p/q")
      ->required();
  cz->add_option("--min-side", o.min_side, "stop before sides get smaller");
  cz->add_option("--max-depth", o.max_depth,
                 "division depth limit, 0 for unlimited (default 64)");
  cz->add_option("--max-select", o.max_select,
                 "selection budget, 0 for unlimited");

  auto* gen = app.add_subcommand("gen", "Write a density fixture");
  gen->add_option("--preset", o.preset,
                  "paper-counterexample | riesz-1d-step | random")
      ->required();
  gen->add_option("--seed", o.seed, "seed for the random preset");
  gen->add_option("--dim", o.dim, "dimension for the random preset");
  gen->add_option("--output", o.output, "density file, - for stdout");

  auto* ren = app.add_subcommand("render", "Static SVG of a decomposition");
  ren->add_option("--input", o.input, "decomposition file (RSDEC 1)")
      ->required();
  ren->add_option("--output", o.output, "SVG file, - for stdout");
  ren->add_option("--svg-width", o.svg_width, "viewport width in px");
  ren->add_option("--svg-height", o.svg_height, "viewport height in px");
  ren->add_option("--color-by", o.color_by, "kind (default) or depth");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (dec->parsed()) return cmd_decompose(o);
    if (ver->parsed()) return cmd_verify(o);
    if (cz->parsed()) return cmd_cz(o);
    if (gen->parsed()) return cmd_gen(o);
    if (ren->parsed()) return cmd_render(o);
    return exit_usage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_internal;
  }
}

}  // namespace rsd::cli
