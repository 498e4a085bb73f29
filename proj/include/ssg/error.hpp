#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ssg {

enum class ErrorCode {
  non_positive,
  rho_negative,
  insufficient_sequence,
  limit_out_of_range,
  invalid_argument,
  gamma_zero,
  word_too_long,
  midline_node_missing,
  topology_mismatch,
  all_vertices_removed,
  singular_system,
  non_positive_mass,
  zero_vector,
  out_of_regime,
  empty_window,
  too_few_points,
  wrong_regime,
  nonvanishing_boundary,
  cell_mismatch,
  slice_unavailable,
  config_invalid,
  io_failure,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI and the tests can dispatch on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ssg
