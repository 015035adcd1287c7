#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace looplie {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Default tolerances shared by the modules.
namespace tol {
inline constexpr double kNumeric = 1e-10;     // algebraic identities
inline constexpr double kGroup = 1e-9;        // group / algebra membership
inline constexpr double kFiniteDiff = 1e-5;   // central finite differences
inline constexpr double kFdStep = 1e-4;
inline constexpr double kRelator = 1e-9;      // representation relator residual
}  // namespace tol

struct InvalidElement : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SamplingFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RealizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double frobenius(const Matrix& m) { return m.norm(); }

/// splitmix64 of (seed, stream); used to give independent sub-seeds.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Largest singular value.
double operator_norm(const Matrix& m);

}  // namespace looplie
