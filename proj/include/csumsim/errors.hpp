#pragma once

#include <stdexcept>
#include <string>

namespace csumsim {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NormalizationError : ConfigError {
    explicit NormalizationError(const std::string& msg) : ConfigError(msg) {}
};

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SingularParameterError : std::runtime_error {
    explicit SingularParameterError(const std::string& msg) : std::runtime_error(msg) {}
};

struct UndefinedFidelityError : std::runtime_error {
    explicit UndefinedFidelityError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace csumsim
