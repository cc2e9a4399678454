#include "rsd/cli.hpp"

#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

using namespace rsd;
namespace fs = std::filesystem;

namespace {

int run_cli(std::vector<std::string> args) {
  std::vector<const char*> argv = {"rsd"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("rsd-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
  static inline int counter = 0;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("gen/decompose/verify pipeline on the counterexample") {
  TempDir tmp;
  const std::string rsd_path = tmp.file("ce.rsd");
  const std::string dec_path = tmp.file("ce.rsdec");

  CHECK(run_cli({"gen", "--preset", "paper-counterexample", "--output",
                 rsd_path}) == cli::exit_ok);
  CHECK(run_cli({"decompose", "--input", rsd_path, "--level", "7/8",
                 "--output", dec_path}) == cli::exit_ok);

  const std::string dec_text = slurp(dec_path);
  CHECK(dec_text.find("select [0,2/3)x[0,1) mean=7/8") != std::string::npos);
  CHECK(dec_text.find("select [2/3,1)x[0,4/7) mean=7/8") != std::string::npos);
  CHECK(dec_text.find("residual [2/3,1)x[4/7,1) reason=below-level") !=
        std::string::npos);
  CHECK(dec_text.find("complete true") != std::string::npos);

  CHECK(run_cli({"verify", "--input", rsd_path, "--decomposition",
                 dec_path}) == cli::exit_ok);
}

TEST_CASE("decompose rejects a level below the domain mean") {
  TempDir tmp;
  const std::string rsd_path = tmp.file("ce.rsd");
  REQUIRE(run_cli({"gen", "--preset", "paper-counterexample", "--output",
                   rsd_path}) == cli::exit_ok);
  CHECK(run_cli({"decompose", "--input", rsd_path, "--level", "1/2",
                 "--output", tmp.file("out.rsdec")}) ==
        cli::exit_level_below_mean);
}

TEST_CASE("verify flags a hand-edited selection") {
  TempDir tmp;
  const std::string rsd_path = tmp.file("ce.rsd");
  const std::string dec_path = tmp.file("ce.rsdec");
  REQUIRE(run_cli({"gen", "--preset", "paper-counterexample", "--output",
                   rsd_path}) == cli::exit_ok);
  REQUIRE(run_cli({"decompose", "--input", rsd_path, "--level", "7/8",
                   "--output", dec_path}) == cli::exit_ok);

  std::string text = slurp(dec_path);
  const std::string from = "select [0,2/3)x[0,1)";
  const std::string to = "select [0,1/2)x[0,1)";
  text.replace(text.find(from), from.size(), to);
  spit(dec_path, text);

  CHECK(run_cli({"verify", "--input", rsd_path, "--decomposition",
                 dec_path}) == cli::exit_verification_failed);
}

TEST_CASE("verify rejects mismatched density/decomposition pairs") {
  TempDir tmp;
  const std::string ce = tmp.file("ce.rsd");
  const std::string step = tmp.file("step.rsd");
  const std::string dec_path = tmp.file("ce.rsdec");
  REQUIRE(run_cli({"gen", "--preset", "paper-counterexample", "--output",
                   ce}) == cli::exit_ok);
  REQUIRE(run_cli({"gen", "--preset", "riesz-1d-step", "--output", step}) ==
          cli::exit_ok);
  REQUIRE(run_cli({"decompose", "--input", ce, "--level", "7/8", "--output",
                   dec_path}) == cli::exit_ok);
  CHECK(run_cli({"verify", "--input", step, "--decomposition", dec_path}) ==
        cli::exit_domain_mismatch);
}

TEST_CASE("verify passes an empty selection when nothing exceeds the level") {
  TempDir tmp;
  const std::string rsd_path = tmp.file("zero.rsd");
  const std::string dec_path = tmp.file("zero.rsdec");
  spit(rsd_path, "RSD 1\ndim 2\nrect 0 1 0 1\ncells 2 2\nf 0 0 0 0\n");
  REQUIRE(run_cli({"decompose", "--input", rsd_path, "--level", "1",
                   "--output", dec_path}) == cli::exit_ok);
  CHECK(slurp(dec_path).find("select") == std::string::npos);
  CHECK(run_cli({"verify", "--input", rsd_path, "--decomposition",
                 dec_path}) == cli::exit_ok);
}

TEST_CASE("the whole pipeline is byte-deterministic") {
  TempDir tmp;
  const std::string rsd_path = tmp.file("r.rsd");
  REQUIRE(run_cli({"gen", "--preset", "random", "--seed", "1234", "--output",
                   rsd_path}) == cli::exit_ok);
  const std::string a = tmp.file("a.rsdec");
  const std::string b = tmp.file("b.rsdec");
  for (const std::string& out : {a, b}) {
    REQUIRE(run_cli({"decompose", "--input", rsd_path, "--level", "20",
                     "--dump-tree", "--output", out}) == cli::exit_ok);
  }
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("gen determinism and unknown presets") {
  TempDir tmp;
  const std::string a = tmp.file("a.rsd");
  const std::string b = tmp.file("b.rsd");
  CHECK(run_cli({"gen", "--preset", "random", "--seed", "7", "--output", a}) ==
        cli::exit_ok);
  CHECK(run_cli({"gen", "--preset", "random", "--seed", "7", "--output", b}) ==
        cli::exit_ok);
  CHECK(slurp(a) == slurp(b));
  CHECK(run_cli({"gen", "--preset", "nope", "--output", tmp.file("c.rsd")}) ==
        cli::exit_unknown_preset);
}

TEST_CASE("cz command") {
  TempDir tmp;
  const std::string rsd_path = tmp.file("ce.rsd");
  const std::string cubes = tmp.file("cubes.txt");
  REQUIRE(run_cli({"gen", "--preset", "paper-counterexample", "--output",
                   rsd_path}) == cli::exit_ok);
  CHECK(run_cli({"cz", "--input", rsd_path, "--level", "7/8", "--output",
                 cubes}) == cli::exit_ok);
  const std::string text = slurp(cubes);
  CHECK(text.find("RSCZ 1") == 0);
  CHECK(text.find("cube [0,1/2)x[0,1/2) mean=1") != std::string::npos);

  // Signed densities are rejected for the cube baseline.
  const std::string signed_path = tmp.file("signed.rsd");
  spit(signed_path, "RSD 1\ndim 1\nrect 0 1\ncells 1\nf -1\n");
  CHECK(run_cli({"cz", "--input", signed_path, "--level", "1"}) ==
        cli::exit_negative_values);

  const std::string wide = tmp.file("wide.rsd");
  spit(wide, "RSD 1\ndim 2\nrect 0 2 0 1\ncells 1 1\nf 1\n");
  CHECK(run_cli({"cz", "--input", wide, "--level", "2"}) ==
        cli::exit_non_cube);

  const std::string weighted = tmp.file("weighted.rsd");
  spit(weighted, "RSD 1\ndim 1\nrect 0 1\ncells 1\nf 1\nw 2\n");
  CHECK(run_cli({"cz", "--input", weighted, "--level", "2"}) ==
        cli::exit_non_lebesgue);
}

TEST_CASE("render command") {
  TempDir tmp;
  const std::string rsd_path = tmp.file("ce.rsd");
  const std::string dec_path = tmp.file("ce.rsdec");
  const std::string svg_path = tmp.file("ce.svg");
  REQUIRE(run_cli({"gen", "--preset", "paper-counterexample", "--output",
                   rsd_path}) == cli::exit_ok);
  REQUIRE(run_cli({"decompose", "--input", rsd_path, "--level", "7/8",
                   "--output", dec_path}) == cli::exit_ok);
  CHECK(run_cli({"render", "--input", dec_path, "--output", svg_path,
                 "--color-by", "depth"}) == cli::exit_ok);
  CHECK(slurp(svg_path).find("<svg") != std::string::npos);

  // Byte-identical renders for identical inputs.
  const std::string svg2 = tmp.file("ce2.svg");
  CHECK(run_cli({"render", "--input", dec_path, "--output", svg2,
                 "--color-by", "depth"}) == cli::exit_ok);
  CHECK(slurp(svg_path) == slurp(svg2));

  // 3-D decompositions cannot be rendered.
  const std::string d3 = tmp.file("d3.rsd");
  const std::string d3dec = tmp.file("d3.rsdec");
  REQUIRE(run_cli({"gen", "--preset", "random", "--seed", "9", "--dim", "3",
                   "--output", d3}) == cli::exit_ok);
  // A level above the |f| <= 16 bound is always at or above the mean.
  REQUIRE(run_cli({"decompose", "--input", d3, "--level", "17", "--output",
                   d3dec}) == cli::exit_ok);
  CHECK(run_cli({"render", "--input", d3dec, "--output",
                 tmp.file("d3.svg")}) == cli::exit_unsupported_dimension);
}

TEST_CASE("float mode produces nearby dyadic cuts") {
  TempDir tmp;
  const std::string rsd_path = tmp.file("step.rsd");
  const std::string dec_path = tmp.file("step.rsdec");
  REQUIRE(run_cli({"gen", "--preset", "riesz-1d-step", "--output",
                   rsd_path}) == cli::exit_ok);
  REQUIRE(run_cli({"decompose", "--input", rsd_path, "--level", "3/2",
                   "--mode", "float", "--output", dec_path}) == cli::exit_ok);
  const std::string text = slurp(dec_path);
  CHECK(text.find("select [0,6004799503160661/9007199254740992)") !=
        std::string::npos);  // nearest double to 2/3
  CHECK(run_cli({"verify", "--input", rsd_path, "--decomposition", dec_path,
                 "--mode", "float"}) == cli::exit_ok);
}

TEST_CASE("usage and file errors have distinct codes") {
  TempDir tmp;
  CHECK(run_cli({}) == cli::exit_usage);
  CHECK(run_cli({"decompose"}) == cli::exit_usage);
  CHECK(run_cli({"decompose", "--input", tmp.file("missing.rsd"), "--level",
                 "1"}) == cli::exit_io);

  const std::string garbage = tmp.file("garbage.rsd");
  spit(garbage, "not a density\n");
  CHECK(run_cli({"decompose", "--input", garbage, "--level", "1"}) ==
        cli::exit_parse);

  const std::string zero = tmp.file("zero.rsd");
  spit(zero, "RSD 1\ndim 1\nrect 0 1\ncells 1\nf 1\nw 0\n");
  CHECK(run_cli({"decompose", "--input", zero, "--level", "1"}) ==
        cli::exit_zero_measure);

  // A policy without any finite guard is a usage error.
  const std::string ok = tmp.file("ok.rsd");
  REQUIRE(run_cli({"gen", "--preset", "riesz-1d-step", "--output", ok}) ==
          cli::exit_ok);
  CHECK(run_cli({"decompose", "--input", ok, "--level", "2", "--max-depth",
                 "0"}) == cli::exit_usage);

  // Negative tolerances are rejected.
  const std::string dec_path = tmp.file("ok.rsdec");
  REQUIRE(run_cli({"decompose", "--input", ok, "--level", "2", "--output",
                   dec_path}) == cli::exit_ok);
  CHECK(run_cli({"verify", "--input", ok, "--decomposition", dec_path,
                 "--tolerance", "-1"}) == cli::exit_usage);
}
