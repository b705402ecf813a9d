#pragma once

#include <stdexcept>
#include <string>

namespace largen {

enum class ErrorKind {
  Domain,         // argument outside the mathematical domain (x < 0, ...)
  Config,         // malformed or conflicting user input
  NotMonotonic,   // potential fails the V'(x) > 0 requirement
  Degenerate,     // perturbation too small for period-dependent work
  NoBracket,      // root finder could not bracket a sign change
  NotFound,       // event / root expected by theory was not located
  Numerical,      // step underflow, energy drift, untrustworthy matrix
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Process exit code used by the command-line tool for a given failure.
// 2: configuration/validation, 3: numerical failure.
inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain:
    case ErrorKind::Config:
    case ErrorKind::NotMonotonic:
    case ErrorKind::Degenerate:
      return 2;
    case ErrorKind::NoBracket:
    case ErrorKind::NotFound:
    case ErrorKind::Numerical:
      return 3;
  }
  return 3;
}

}  // namespace largen
