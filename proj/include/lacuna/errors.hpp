#pragma once

#include <stdexcept>
#include <string>

namespace lacuna {

// 64-bit integer result would wrap; callers must treat this as fatal for the
// requested parameters, never as a saturated value.
struct OverflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A search or table exceeded its configured budget.  The answer is "unknown",
// not "no".
struct ResourceExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VerificationFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace lacuna
