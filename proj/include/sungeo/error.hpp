#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sungeo {

enum class ErrorCode : std::uint8_t {
  shape,
  not_finite,
  not_unitary,
  det_not_one,
  not_skew,
  eig_failed,
  residual_exceeded,
  zero_input,
  zeta_not_integer,
  not_admissible,
  infeasible,
  singleton_theta,
  unsupported_n,
};

constexpr std::string_view code_name(ErrorCode c) noexcept {
  switch (c) {
    case ErrorCode::shape: return "shape";
    case ErrorCode::not_finite: return "not_finite";
    case ErrorCode::not_unitary: return "not_unitary";
    case ErrorCode::det_not_one: return "det_not_one";
    case ErrorCode::not_skew: return "not_skew";
    case ErrorCode::eig_failed: return "eig_failed";
    case ErrorCode::residual_exceeded: return "residual_exceeded";
    case ErrorCode::zero_input: return "zero_input";
    case ErrorCode::zeta_not_integer: return "zeta_not_integer";
    case ErrorCode::not_admissible: return "not_admissible";
    case ErrorCode::infeasible: return "infeasible";
    case ErrorCode::singleton_theta: return "singleton_theta";
    case ErrorCode::unsupported_n: return "unsupported_n";
  }
  return "unknown";
}

/// Numerical failures are eig_failed and residual_exceeded; everything else
/// is a problem with the caller's input.
constexpr bool is_numerical(ErrorCode c) noexcept {
  return c == ErrorCode::eig_failed || c == ErrorCode::residual_exceeded;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail, double residual = 0.0)
      : std::runtime_error(std::string(code_name(code)) + ": " + detail),
        code_(code),
        residual_(residual) {}

  ErrorCode code() const noexcept { return code_; }
  /// Offending residual for validation failures, 0 otherwise.
  double residual() const noexcept { return residual_; }

 private:
  ErrorCode code_;
  double residual_;
};

}  // namespace sungeo
