#pragma once

#include <stdexcept>
#include <string>

namespace biohybrid {

// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// det(F) <= 0 or a non-invertible tensor where an inverse is required.
class InvalidDeformation : public Error
{
public:
    using Error::Error;
};

// A parameter outside its admissible domain (e.g. kappa > 1/3).
class ParameterDomainError : public Error
{
public:
    using Error::Error;
};

// History variables in an impossible state (negative density, NaN).
class StateCorruption : public Error
{
public:
    using Error::Error;
};

// Local or global Newton iteration failed to converge.
class SolverError : public Error
{
public:
    SolverError(const std::string& what, double last_residual, int iterations)
        : Error(what), last_residual_(last_residual), iterations_(iterations)
    {}
    double last_residual() const noexcept { return last_residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double last_residual_;
    int iterations_;
};

// An element Jacobian became non-positive.
class ElementInversion : public Error
{
public:
    ElementInversion(const std::string& what, int element)
        : Error(what), element_(element)
    {}
    int element() const noexcept { return element_; }

private:
    int element_;
};

class ConfigError : public Error
{
public:
    using Error::Error;
};

class IoError : public Error
{
public:
    using Error::Error;
};

} // namespace biohybrid
