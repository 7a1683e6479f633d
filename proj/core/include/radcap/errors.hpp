#pragma once

#include <stdexcept>
#include <string>

namespace radcap {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad arguments or configuration (ordering, ranges, unknown names).
class ParameterError : public Error {
public:
    using Error::Error;
};

// The operation is not defined for this kind of input.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class DivergenceError : public Error {
public:
    using Error::Error;
};

// Query exactly at a breakpoint without a side selection.
class UndefinedPointError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

}  // namespace radcap
