#include "beamdecay/errors.hpp"

namespace beamdecay {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::domain_error: return "DOMAIN_ERROR";
        case ErrorCode::precondition_violation: return "PRECONDITION_VIOLATION";
        case ErrorCode::certificate_ineligible: return "CERTIFICATE_INELIGIBLE";
        case ErrorCode::lambda_inadmissible: return "LAMBDA_INADMISSIBLE";
        case ErrorCode::mesh_incompatible: return "MESH_INCOMPATIBLE";
        case ErrorCode::resolution_error: return "RESOLUTION_ERROR";
        case ErrorCode::numerical_error: return "NUMERICAL_ERROR";
        case ErrorCode::insufficient_data: return "INSUFFICIENT_DATA";
        case ErrorCode::rate_undefined: return "RATE_UNDEFINED";
        case ErrorCode::config_error: return "CONFIG_ERROR";
    }
    return "UNKNOWN";
}

}  // namespace beamdecay
