#pragma once

#include <stdexcept>
#include <string>

namespace symlab {

/// A precondition on a mathematical argument was violated (n ≤ mp, r < 0, ...).
class domain_error : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

/// Inconsistent or missing configuration (grid too coarse, constant not supplied, ...).
class config_error : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative method failed to converge.
class numeric_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message)
{
    if (!condition) {
        throw domain_error(message);
    }
}

} // namespace detail
} // namespace symlab
