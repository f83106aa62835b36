#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace vp {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// One bit per element, values 0 or 1.
using Bits = std::vector<std::uint8_t>;

/// Raised when the channel Gram matrix is too ill-conditioned to invert.
/// Callers are expected to redraw the channel.
class SingularChannelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vp
