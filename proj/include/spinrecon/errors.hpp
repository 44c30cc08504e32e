#pragma once

#include <stdexcept>
#include <string>

namespace spinrecon {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  NotHermitian(const std::string& what, double deviation)
      : Error(what), deviation_(deviation) {}
  double deviation() const noexcept { return deviation_; }

 private:
  double deviation_;
};

class UnphysicalState : public Error {
 public:
  using Error::Error;
};

// Raised when a Fock-space truncation drops more probability mass than allowed.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double deficit)
      : Error(what), deficit_(deficit) {}
  double deficit() const noexcept { return deficit_; }

 private:
  double deficit_;
};

// Raised when a reconstruction is attempted through a near-singular map.
class IllConditioned : public Error {
 public:
  IllConditioned(const std::string& what, double determinant)
      : Error(what), determinant_(determinant) {}
  double determinant() const noexcept { return determinant_; }

 private:
  double determinant_;
};

// A mapping constraint that must hold by construction was violated.
class ConstraintViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace spinrecon
