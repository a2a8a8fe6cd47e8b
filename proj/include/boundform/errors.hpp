#pragma once

#include <stdexcept>
#include <string>

namespace boundform {

/// Invalid user-supplied configuration (syntax or violated precondition).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical procedure failed to converge or lost accuracy.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a function (e.g. |x| > L).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A caller broke a documented precondition.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace boundform
