#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace isostrata {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A compatible-group axiom failed during build_group.
class StructureViolation : public Error {
 public:
  StructureViolation(std::string axiom, std::string where, double residual)
      : Error("structure violation (" + axiom + ") at " + where +
              ", residual " + std::to_string(residual)),
        axiom_(std::move(axiom)),
        where_(std::move(where)),
        residual_(residual) {}

  const std::string& axiom() const { return axiom_; }
  const std::string& where() const { return where_; }
  double residual() const { return residual_; }

 private:
  std::string axiom_;
  std::string where_;
  double residual_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::string field, std::string message, int line = -1)
      : Error("parse error" + (line > 0 ? " (line " + std::to_string(line) + ")" : std::string()) +
              " in '" + field + "': " + message),
        field_(std::move(field)),
        line_(line) {}

  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  std::string field_;
  int line_;
};

/// Overflow or NaN produced while flowing; carries the last iterate.
class NonFinite : public Error {
 public:
  NonFinite(const std::string& what, Eigen::VectorXd iterate)
      : Error(what), iterate_(std::move(iterate)) {}
  const Eigen::VectorXd& iterate() const { return iterate_; }

 private:
  Eigen::VectorXd iterate_;
};

class FlowFailed : public Error {
 public:
  using Error::Error;
};

class NotMinimal : public Error {
 public:
  using Error::Error;
};

class NoInvariantComplement : public Error {
 public:
  using Error::Error;
};

class EmptyResult : public Error {
 public:
  using Error::Error;
};

class NoDenseStratum : public Error {
 public:
  using Error::Error;
};

}  // namespace isostrata
