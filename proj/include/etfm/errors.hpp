#pragma once

#include <stdexcept>
#include <string>

namespace etfm {

// Input exceeds a documented enumeration/computation budget.
class ResourceLimitError : public std::runtime_error {
public:
    explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

// A constructed object failed its numeric validation (named property + deviation).
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string property, double deviation, const std::string& what)
        : std::runtime_error(what), property_(std::move(property)), deviation_(deviation) {}

    const std::string& property() const { return property_; }
    double deviation() const { return deviation_; }

private:
    std::string property_;
    double deviation_;
};

// Malformed textual or JSON input.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace etfm
