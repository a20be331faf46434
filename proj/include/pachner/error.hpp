#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pachner {

// Base class for every failure raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed textual input (signatures, graph files, CSV, JSON).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// A resource cap (node budget) was hit; carries the last fully completed depth.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, int completed_depth)
      : Error(what), completed_depth_(completed_depth) {}

  int completed_depth() const noexcept { return completed_depth_; }

 private:
  int completed_depth_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace pachner
