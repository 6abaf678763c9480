#pragma once

#include <stdexcept>
#include <string>

namespace conekit {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// bad argument ranges (negative radii, p <= 1, empty grids, ...)
class DomainError : public Error {
public:
    using Error::Error;
};

// mu_j^2 <= 0, i.e. H fails to be positive
class PositivityViolation : public Error {
public:
    using Error::Error;
};

class UnsupportedCrossSection : public Error {
public:
    using Error::Error;
};

class InsufficientSpectrum : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

// spectrum has no eigenfunction data, only mu and multiplicities
class NormsOnlyError : public Error {
public:
    using Error::Error;
};

class SingularPointError : public Error {
public:
    using Error::Error;
};

class QuadratureError : public Error {
public:
    using Error::Error;
};

}  // namespace conekit
