#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace dto {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state left the open domain of a penalized objective, i.e. some
/// constraint reached sigma(t) - g_j(x, t) < 1e-12.
class DomainError : public Error {
 public:
  DomainError(std::size_t constraint_index, double gap, const std::string& what)
      : Error(what), constraint_index_(constraint_index), gap_(gap) {}

  std::size_t constraint_index() const noexcept { return constraint_index_; }
  double gap() const noexcept { return gap_; }

 private:
  std::size_t constraint_index_;
  double gap_;
};

class SingularHessianError : public Error {
 public:
  using Error::Error;
};

/// Initial states violate g_ij(x_i(0), 0) < sigma_i(0).
class InfeasibleStartError : public Error {
 public:
  using Error::Error;
};

/// Failure of a full simulation, tagged with the module, time, and agent
/// at which it happened.
class SimulationError : public Error {
 public:
  SimulationError(std::string module, double time, std::size_t agent, const std::string& detail)
      : Error("[" + module + "] t=" + std::to_string(time) + " agent=" + std::to_string(agent + 1) +
              ": " + detail),
        module_(std::move(module)),
        time_(time),
        agent_(agent) {}

  const std::string& module() const noexcept { return module_; }
  double time() const noexcept { return time_; }
  /// Zero-based agent index.
  std::size_t agent() const noexcept { return agent_; }

 private:
  std::string module_;
  double time_;
  std::size_t agent_;
};

}  // namespace dto
