#pragma once

#include <stdexcept>
#include <string>

namespace gfamix {

// Failure classes map onto CLI exit codes (2, 3, 4).
enum class ErrorKind { Validation, Io, Numerical };

class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class ValidationError : public Error
{
public:
    explicit ValidationError(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

class IoError : public Error
{
public:
    explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

class NumericalError : public Error
{
public:
    explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

} // namespace gfamix
