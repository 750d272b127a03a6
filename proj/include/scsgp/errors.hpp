#pragma once

#include <stdexcept>
#include <string>

namespace scsgp {

// Adaptive truncation gave up before the tail mass dropped below tolerance.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, int n_max_reached)
      : std::runtime_error(what), n_max_reached_(n_max_reached) {}
  int n_max_reached() const noexcept { return n_max_reached_; }

 private:
  int n_max_reached_;
};

class SpectralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An expectation value that should be real came back with a large imaginary part.
class HermiticityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace scsgp
