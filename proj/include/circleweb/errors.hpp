#pragma once

#include <stdexcept>
#include <string>

namespace circleweb {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// minkgeom
class PoleError : public Error { using Error::Error; };
class ImaginaryCircle : public Error { using Error::Error; };
class CoincidentCircles : public Error { using Error::Error; };
class NotInAlgebra : public Error { using Error::Error; };

// polycurve
class BadParams : public Error { using Error::Error; };
class BadCurve : public Error { using Error::Error; };
class BasePointError : public Error { using Error::Error; };
class SingularParam : public Error { using Error::Error; };
class NotAvailable : public Error { using Error::Error; };
class IdenticallyZero : public Error { using Error::Error; };

// webcore
class NoSheet : public Error { using Error::Error; };
class FoldPoint : public Error { using Error::Error; };
class InsufficientSamples : public Error { using Error::Error; };
class SheetJump : public Error { using Error::Error; };
class NoConvergence : public Error { using Error::Error; };
class DegenerateConfig : public Error { using Error::Error; };

// render
class EmptyPicture : public Error { using Error::Error; };

// cli
class ConfigError : public Error {
 public:
  ConfigError(int line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace circleweb
