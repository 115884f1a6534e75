#pragma once

#include <stdexcept>
#include <string>

namespace wsr {

enum class errc {
  asymmetric_distance,
  nonzero_diagonal,
  triangle_violation,
  empty_subset,
  degenerate_subset,
  nonpositive_order,
  incomplete_cover,
  exact_mode_too_large,
  n_too_large,
  space_mismatch,
  not_non_increasing,
  solver_failure,
  cell_mass_mismatch,
  degenerate_support,
  bad_level_zero,
  bad_radii,
  bad_counts,
  bad_shell_table,
  moment_below_one,
  no_finite_radii,
  k_too_large_for_n,
  absolute_continuity_violation,
  empty_center_set,
  not_line_embeddable,
  nonpositive_risk,
  unknown_example,
  io_error,
  parse_error,
  invalid_argument,
};

class error : public std::runtime_error {
 public:
  error(errc code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw error(code, message);
}

}  // namespace wsr
