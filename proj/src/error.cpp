#include "latrad/error.hpp"

namespace latrad {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::index_out_of_range: return "index_out_of_range";
    case ErrorCode::duplicate_site: return "duplicate_site";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::in_exceptional_set: return "in_exceptional_set";
    case ErrorCode::delta_too_large: return "delta_too_large";
    case ErrorCode::on_spectrum: return "on_spectrum";
    case ErrorCode::not_converged: return "not_converged";
    case ErrorCode::divergent: return "divergent";
    case ErrorCode::degenerate_point: return "degenerate_point";
    case ErrorCode::vanishing_curvature: return "vanishing_curvature";
    case ErrorCode::empty_surface: return "empty_surface";
    case ErrorCode::direction_outside_domain: return "direction_outside_domain";
    case ErrorCode::multi_wave_undecomposed: return "multi_wave_undecomposed";
    case ErrorCode::near_singular_system: return "near_singular_system";
    case ErrorCode::fit_failed: return "fit_failed";
    }
    return "unknown";
}

} // namespace latrad
