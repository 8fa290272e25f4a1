#pragma once

#include <stdexcept>
#include <string>

namespace origami4
{

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments or violated type invariants.
class InputError : public Error
{
public:
  using Error::Error;
};

/// Valid input outside the domain of an operation (wrong vertex class, unsupported variant).
class DomainError : public Error
{
public:
  using Error::Error;
};

/// Driver or synchronizing angle outside the feasible range.
class RangeError : public Error
{
public:
  using Error::Error;
};

/// Singular constants or 0/0 configurations.
class DegenerateError : public Error
{
public:
  using Error::Error;
};

/// No sign assignment realizes the requested branch.
class BranchError : public Error
{
public:
  using Error::Error;
};

/// Geometric construction failed an internal coincidence check.
class ConsistencyError : public Error
{
public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error
{
public:
  using Error::Error;
};

/// Unparseable file contents (bad JSON, wrong schema).
class FormatError : public Error
{
public:
  using Error::Error;
};

} // namespace origami4
