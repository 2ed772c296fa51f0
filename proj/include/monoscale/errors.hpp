#ifndef MONOSCALE_ERRORS_HPP
#define MONOSCALE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace monoscale {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A caller-supplied value violates a precondition (non-finite input,
/// empty window, mismatched list lengths, ...).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// A configuration value is outside its documented range.
class InvalidConfigError : public Error {
 public:
  using Error::Error;
};

/// A file could not be parsed; the message carries the file and line.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A file parsed but its content violates a stream invariant
/// (non-monotone timestamps, badly denormalized quaternion, ...).
class IntegrityError : public Error {
 public:
  using Error::Error;
};

/// An estimator was queried or updated before it was fitted.
class NotReadyError : public Error {
 public:
  using Error::Error;
};

/// The autoregressive normal equations are singular and inconsistent.
class SingularSystemError : public Error {
 public:
  using Error::Error;
};

/// Every frame pair in a sequence was degenerate; no estimate exists.
class NoValidPairsError : public Error {
 public:
  using Error::Error;
};

/// Two timestamped streams could not be associated within tolerance.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

}  // namespace monoscale

#endif  // MONOSCALE_ERRORS_HPP
