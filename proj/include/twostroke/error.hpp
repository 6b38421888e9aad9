#pragma once

#include <stdexcept>
#include <string>

namespace twostroke {

enum class ErrorCode {
    invalid_argument,
    shape_mismatch,
    overflow,
    cyclicity_violated,
    singular_system,
    infeasible_catalyst,
    degenerate_point,
    window_violation,
    guard_exceeded,
    no_matching,
};

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace twostroke
