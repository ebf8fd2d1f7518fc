#pragma once

#include <stdexcept>
#include <string>

namespace spca {

// Base of every error raised by the library. The CLI maps subclasses to exit
// codes (InvalidInput -> 2, NoConvergence -> 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, double residual)
      : Error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class GenerationFailed : public Error {
 public:
  using Error::Error;
};

class RefusesToCertify : public Error {
 public:
  using Error::Error;
};

}  // namespace spca
