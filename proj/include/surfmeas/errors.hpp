#pragma once

#include <stdexcept>
#include <string>

namespace surfmeas {

/// Input that violates a documented precondition (bad file, invalid body, ...).
class InvalidInput : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An iterative method that did not reach its tolerance.
class NoConvergence : public std::runtime_error {
public:
  NoConvergence(const std::string &what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

} // namespace surfmeas
