#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace trisum {

using cplx = std::complex<double>;

inline constexpr const char* kEngineVersion = "1.0.0";

inline constexpr double kPi    = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 6.28318530717958647692528676655900577;

// Thrown when arguments violate a documented precondition.  CLI exit code 2.
struct parameter_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when a computation cannot reach the requested accuracy within its
// cost budget.  Carries the best error estimate achieved.  CLI exit code 3.
struct accuracy_error : std::runtime_error {
    double achieved;
    accuracy_error(const std::string& msg, double achieved_err)
        : std::runtime_error(msg), achieved(achieved_err) {}
};

// Thrown when a domain or term count exceeds a configured cap.  CLI exit code 3.
struct resource_error : std::runtime_error {
    std::size_t cap;
    resource_error(const std::string& msg, std::size_t cap_value)
        : std::runtime_error(msg), cap(cap_value) {}
};

}  // namespace trisum
