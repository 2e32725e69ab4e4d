#pragma once

#include <stdexcept>
#include <string>

namespace shocklab {

enum class ErrorKind {
  domain,
  solver,
  evaluation,
  quadrature,
  diagnostics,
  config,
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

class SolverError : public Error {
 public:
  explicit SolverError(const std::string& what) : Error(ErrorKind::solver, what) {}
};

class EvaluationError : public Error {
 public:
  explicit EvaluationError(const std::string& what) : Error(ErrorKind::evaluation, what) {}
};

class QuadratureError : public Error {
 public:
  explicit QuadratureError(const std::string& what) : Error(ErrorKind::quadrature, what) {}
};

class DiagnosticsError : public Error {
 public:
  explicit DiagnosticsError(const std::string& what) : Error(ErrorKind::diagnostics, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

}  // namespace shocklab
