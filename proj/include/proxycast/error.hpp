#pragma once

#include <stdexcept>
#include <string>

namespace proxycast {

// Failure categories map one-to-one onto the CLI exit codes.
enum class ErrorKind { config = 1, data = 2, numeric = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(ErrorKind::numeric, what) {}
};

// Raised when --offline forbids a fetch that the cache cannot satisfy.
class OfflineError : public DataError {
public:
    explicit OfflineError(const std::string& what) : DataError(what) {}
};

}  // namespace proxycast
