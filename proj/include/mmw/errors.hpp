#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mmw {

// Base for every error the library raises. The CLI maps these to exit status 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// k2 at or above pi^2/8 has no finite motional capacitance.
class InfeasibleCouplingError : public Error {
 public:
  using Error::Error;
};

class SearchError : public Error {
 public:
  using Error::Error;
};

// Blocks combined on different frequency grids.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

class SingularConversionError : public Error {
 public:
  SingularConversionError(double frequency_hz, const std::string& what)
      : Error(what), frequency_hz_(frequency_hz) {}
  double frequency_hz() const noexcept { return frequency_hz_; }

 private:
  double frequency_hz_;
};

enum class BandSide { Lower, Upper };

class BandEdgeError : public Error {
 public:
  BandEdgeError(BandSide side, const std::string& what) : Error(what), side_(side) {}
  BandSide side() const noexcept { return side_; }

 private:
  BandSide side_;
};

class DegeneratePassbandError : public Error {
 public:
  using Error::Error;
};

class StopbandError : public Error {
 public:
  using Error::Error;
};

// Admittance curve without an identifiable resonance / anti-resonance pair.
class StructureError : public Error {
 public:
  using Error::Error;
};

class InfeasibleSpecError : public Error {
 public:
  using Error::Error;
};

// Malformed text input. line() is 1-based; 0 when the error is not tied to a line.
class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace mmw
