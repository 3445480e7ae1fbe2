#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace beamdecay {

enum class ErrorCode {
    domain_error,
    precondition_violation,
    certificate_ineligible,
    lambda_inadmissible,
    mesh_incompatible,
    resolution_error,
    numerical_error,
    insufficient_data,
    rate_undefined,
    config_error,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a stable machine-readable code next to the message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace beamdecay
