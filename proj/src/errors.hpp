#pragma once

#include <stdexcept>
#include <string>

namespace stepwell {

// Error categories mirrored one-to-one by the C API status codes.
enum class ErrorCode {
    invalid_argument = 1,
    domain           = 2,
    level_index      = 3,
    no_bound_states  = 4,
    unsupported      = 5,
    parse            = 6,
    io               = 7,
    internal         = 8,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

} // namespace stepwell
