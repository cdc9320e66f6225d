#pragma once

#include <stdexcept>
#include <string>

namespace coulomb {

// Invalid mathematical input (origin evaluation, coincident points, ...).
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Derivative order above the engine cap.
struct CapExceeded : std::runtime_error {
  explicit CapExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite value encountered where a finite one is required.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Adaptive step halving exhausted.
struct StepCollapse : std::runtime_error {
  explicit StepCollapse(const std::string& msg) : std::runtime_error(msg) {}
};

// A pair distance fell below the collision threshold during integration.
struct CollisionDetected : std::runtime_error {
  CollisionDetected(const std::string& msg, double t, std::size_t a, std::size_t b)
      : std::runtime_error(msg), time(t), particle_a(a), particle_b(b) {}
  double time;
  std::size_t particle_a;
  std::size_t particle_b;
};

struct InsufficientSamples : std::runtime_error {
  explicit InsufficientSamples(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateFit : std::runtime_error {
  explicit DegenerateFit(const std::string& msg) : std::runtime_error(msg) {}
};

// Config-file problems; `line` is 0 when not tied to a specific line.
struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line_no = 0)
      : std::runtime_error(msg), line(line_no) {}
  int line;
};

}  // namespace coulomb
