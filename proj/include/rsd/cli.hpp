#ifndef RSD_CLI_HPP
#define RSD_CLI_HPP

#include "rsd/errors.hpp"

namespace rsd::cli {

// Stable process exit codes, one per documented failure mode.
enum ExitCode : int {
  exit_ok = 0,
  exit_verification_failed = 1,
  exit_usage = 2,
  exit_io = 3,
  exit_parse = 4,
  exit_level_below_mean = 5,
  exit_zero_measure = 6,
  exit_domain_mismatch = 7,
  exit_non_cube = 8,
  exit_negative_values = 9,
  exit_non_lebesgue = 10,
  exit_unknown_preset = 11,
  exit_unsupported_dimension = 12,
  exit_internal = 70,
};

int exit_code_for(Errc code);

// Full command dispatch: decompose, verify, cz, gen, render.
int run(int argc, const char* const* argv);

}  // namespace rsd::cli

#endif
