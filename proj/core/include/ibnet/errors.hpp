#ifndef IBNET_ERRORS_HPP
#define IBNET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ibnet {

// Invalid configuration or arguments supplied by the caller.
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of a function.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Malformed input data (CSV structure, headers, unreadable files).
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A fitting routine was given too little (or degenerate) data.
struct InsufficientDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A metric is not defined for the given input (e.g. empty network).
struct UndefinedMetricError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A query fell outside the supported range of a fitted object.
struct OutOfRangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Internal consistency violation; indicates a bug, not bad input.
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace ibnet

#endif
