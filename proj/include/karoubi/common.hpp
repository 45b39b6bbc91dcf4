#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace karoubi {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// All library errors carry a short machine-readable code ("NotIdempotent",
// "ShapeMismatch", ...) next to the human-readable message. The CLI maps
// codes to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& message) {
  throw Error(code, message);
}

// Absolute entrywise tolerance used by every approximate comparison.
struct Tolerance {
  double eps = 1e-9;

  Tolerance() = default;
  Tolerance(double e) : eps(e) {
    if (!(e >= 0.0)) fail("BadTolerance", "tolerance must be nonnegative");
  }
};

}  // namespace karoubi
