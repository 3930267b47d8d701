#pragma once

#include <stdexcept>
#include <string>

namespace sniep {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// qf() met an (numerically) singular input.
class SingularInput : public Error {
 public:
  using Error::Error;
};

/// Retraction failed because Q + dQ is singular.
class SingularRetraction : public Error {
 public:
  using Error::Error;
};

class NonpositiveShift : public Error {
 public:
  using Error::Error;
};

/// Inner CG hit its iteration cap or broke down before meeting both tests.
class CgBudgetExhausted : public Error {
 public:
  CgBudgetExhausted(const std::string& what, int iters)
      : Error(what), iters_(iters) {}
  int iters() const { return iters_; }

 private:
  int iters_;
};

class StationaryPointError : public Error {
 public:
  using Error::Error;
};

class DenseCapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace sniep
