#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace latrad {

/// Failure categories. The CLI maps each one to its own exit code.
enum class ErrorCode {
    invalid_argument = 2,
    dimension_mismatch,
    index_out_of_range,
    duplicate_site,
    parse_error,
    io_error,
    in_exceptional_set,
    delta_too_large,
    on_spectrum,
    not_converged,
    divergent,
    degenerate_point,
    vanishing_curvature,
    empty_surface,
    direction_outside_domain,
    multi_wave_undecomposed,
    near_singular_system,
    fit_failed,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace latrad
