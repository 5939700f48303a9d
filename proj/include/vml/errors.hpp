#ifndef VML_ERRORS_HPP
#define VML_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vml {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A documented size limit (enumeration cutoff, LP cutoff) was exceeded.
class CapacityExceeded : public Error {
 public:
  using Error::Error;
};

/// An operation that needs a finite dual extreme-point set was given a
/// Euclidean-kind norm.
class NotPolyhedral : public Error {
 public:
  using Error::Error;
};

class NoRybakovFound : public Error {
 public:
  using Error::Error;
};

class NotNormalized : public Error {
 public:
  using Error::Error;
};

/// Argument outside the documented domain of an operation.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The simplex solver reported infeasibility where the feasible set is
/// known to contain the origin.
class LPInfeasible : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw DimensionMismatch(std::string(what) + ": expected dimension " +
                            std::to_string(want) + ", got " +
                            std::to_string(got));
  }
}

}  // namespace detail
}  // namespace vml

#endif  // VML_ERRORS_HPP
