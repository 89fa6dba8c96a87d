#pragma once

#include <stdexcept>
#include <string>

namespace hcube {

/// Bad or inconsistent input (wrong sizes, non-finite values, format violations).
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Request exceeds a configured size/time budget.
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical procedure failed to reach its accuracy contract.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hcube
