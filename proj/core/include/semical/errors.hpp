#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace semical {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class NotSkewAdjoint : public Error {
 public:
  using Error::Error;
};

class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// A positive eigenvalue cluster of -A^2 with odd multiplicity.
class PairingError : public Error {
 public:
  PairingError(const std::string& what, double lower, double upper)
      : Error(what), lower_(lower), upper_(upper) {}

  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

 private:
  double lower_;
  double upper_;
};

/// Some eigenvalue of -A^2 falls strictly between eps/4 and eps/2.
class GapViolation : public Error {
 public:
  GapViolation(const std::string& what, double epsilon, std::vector<double> offending)
      : Error(what), epsilon_(epsilon), offending_(std::move(offending)) {}

  double epsilon() const noexcept { return epsilon_; }
  const std::vector<double>& offending() const noexcept { return offending_; }

 private:
  double epsilon_;
  std::vector<double> offending_;
};

/// The automatic gap parameter cannot be taken from the base point.
class EpsilonError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace semical
