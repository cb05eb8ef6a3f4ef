#ifndef BEAMLAB_ERRORS_HPP
#define BEAMLAB_ERRORS_HPP

#include <stdexcept>

namespace beamlab {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A physical parameter is outside its admissible range.
class DomainError : public Error {
  public:
    using Error::Error;
};

// Parameters are individually admissible but the requested reduction is
// undefined (zero photon flow or zero linewidth).
class DegenerateProblemError : public DomainError {
  public:
    using DomainError::DomainError;
};

// A numerical-configuration value (grid size, step, path count, window) is
// invalid.
class ConfigError : public Error {
  public:
    using Error::Error;
};

// The requested curve window cannot support a decay-rate fit.
class FitDomainError : public Error {
  public:
    using Error::Error;
};

// A number-basis truncation lost more probability weight than allowed.
class TruncationError : public Error {
  public:
    using Error::Error;
};

// An iterative or numerical procedure failed to reach its accuracy target.
class NumericalError : public Error {
  public:
    using Error::Error;
};

}  // namespace beamlab

#endif  // BEAMLAB_ERRORS_HPP
