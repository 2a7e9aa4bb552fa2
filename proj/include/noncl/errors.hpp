#pragma once

#include <stdexcept>
#include <string>

namespace noncl {

// Failure categories. The CLI maps these onto process exit codes; library
// callers can switch on code() instead of parsing messages.
enum class errc {
  cutoff_too_small,
  tail_mass_exceeded,
  zero_norm,
  not_normalized,
  not_a_density_matrix,
  not_a_distribution,
  not_isometry,
  dimension_mismatch,
  unknown_family,
  negative_input,
  dimension_too_large,
  cutoff_cap_exceeded,
  no_sign_change,
  internal_consistency,
  bad_parameter,
  io_failure,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::cutoff_too_small:     return "cutoff-too-small";
    case errc::tail_mass_exceeded:   return "tail-mass-exceeded";
    case errc::zero_norm:            return "zero-norm";
    case errc::not_normalized:       return "not-normalized";
    case errc::not_a_density_matrix: return "not-a-density-matrix";
    case errc::not_a_distribution:   return "not-a-distribution";
    case errc::not_isometry:         return "not-isometry";
    case errc::dimension_mismatch:   return "dimension-mismatch";
    case errc::unknown_family:       return "unknown-family";
    case errc::negative_input:       return "negative-input";
    case errc::dimension_too_large:  return "dimension-too-large";
    case errc::cutoff_cap_exceeded:  return "cutoff-cap-exceeded";
    case errc::no_sign_change:       return "no-sign-change";
    case errc::internal_consistency: return "internal-consistency";
    case errc::bad_parameter:        return "bad-parameter";
    case errc::io_failure:           return "io-failure";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
  throw error(code, what);
}

}  // namespace noncl
