#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lpsw {

// Invalid configuration or argument; carries the full list of violations
// so a config file can be fixed in one pass.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::string msg) : std::runtime_error(std::move(msg)) {}
    explicit ConfigError(const std::vector<std::string>& violations)
        : std::runtime_error(join(violations)), violations_(violations) {}
    const std::vector<std::string>& violations() const { return violations_; }

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "configuration invalid:";
        for (const auto& m : v) s += "\n  - " + m;
        return s;
    }
    std::vector<std::string> violations_;
};

// A precondition of an operation does not hold (e.g. a parameter region
// where an estimate is not valid).
class PreconditionError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A field carries spectral mass above the top annulus of the partition
// it is being measured against.
class CoverageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Advective CFL condition violated; reports the largest admissible step.
class CflError : public std::runtime_error {
  public:
    CflError(double dt, double required)
        : std::runtime_error("CFL violation: dt=" + std::to_string(dt) +
                             " exceeds admissible dt=" + std::to_string(required)),
          required_dt(required) {}
    double required_dt;
};

// Non-finite values appeared during time integration.
class DivergenceError : public std::runtime_error {
  public:
    explicit DivergenceError(double t)
        : std::runtime_error("solution diverged (non-finite values) at t=" + std::to_string(t)),
          time(t) {}
    double time;
};

// The height regime 1 + h >= 1/2 was left during a run.
class RegimeExitError : public std::runtime_error {
  public:
    RegimeExitError(double t, double min_height)
        : std::runtime_error("height regime exit at t=" + std::to_string(t) +
                             ": min(1+h)=" + std::to_string(min_height)),
          time(t), min_height(min_height) {}
    double time;
    double min_height;
};

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace lpsw
