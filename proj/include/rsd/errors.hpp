#ifndef RSD_ERRORS_HPP
#define RSD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rsd {

// Every documented failure mode gets its own code so the CLI can map
// them to stable process exit statuses.
enum class Errc {
  io_failure,
  parse_error,
  level_below_mean,
  zero_total_measure,
  domain_mismatch,
  non_cube_domain,
  negative_values,
  non_lebesgue_weights,
  unknown_preset,
  unsupported_dimension,
  invalid_policy,
  precondition,        // caller violated a documented precondition
  internal_invariant,  // a state the algorithm proves impossible
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace rsd

#endif
