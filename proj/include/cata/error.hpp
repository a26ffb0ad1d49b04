#ifndef CATA_ERROR_HPP
#define CATA_ERROR_HPP

#include <stdexcept>
#include <string>

namespace cata {

/// Base of every error thrown by the library. The CLI maps the three
/// subclasses onto exit codes 1, 2 and 3.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or incomplete input data.
class DataError : public Error
{
public:
  using Error::Error;
};

/// Invalid parameters (out-of-range K, alpha, B, ...).
class ConfigError : public Error
{
public:
  using Error::Error;
};

/// Degenerate geometry, rank deficiency, solver failure.
class NumericalError : public Error
{
public:
  using Error::Error;
};

} // namespace cata

#endif // CATA_ERROR_HPP
