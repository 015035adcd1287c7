#pragma once

#include <functional>
#include <map>
#include <vector>

#include "looplie/surface.hpp"

namespace looplie::chen {

using Sampler = std::function<Matrix(double)>;

/// Which linear system the transport solves. The integral form R = I + ∫ A R
/// is Forward; Backward solves dR/dt = −A R by negating A.
enum class Convention { Forward, Backward };

/// A piece of a path on [t0, t1] sampled on its own uniform grid. Breakpoints
/// between pieces are sampled one-sidedly, so jumps in A cost no accuracy.
struct Segment {
  double t0 = 0.0;
  double t1 = 1.0;
  Sampler sampler;
  int intervals = 2;
};

class MatrixPath {
 public:
  MatrixPath(Sampler a, int intervals);
  explicit MatrixPath(std::vector<Segment> segments);
  /// Equal-length constant pieces with the given values.
  static MatrixPath piecewise_constant(const std::vector<Matrix>& values, int intervals_per_piece);

  int dim() const { return dim_; }
  int intervals() const;
  const std::vector<Segment>& segments() const { return segments_; }
  /// Cached samples per segment at its intervals + 1 grid points.
  const std::vector<std::vector<Matrix>>& samples() const { return samples_; }

  /// This path on [0, ½] followed by `later` on [½, 1], each piece keeping its grid.
  MatrixPath concat(const MatrixPath& later) const;
  /// Same path with every interval count divided by `factor` (at least 1).
  MatrixPath coarsened(int factor) const;
  MatrixPath scaled(double c) const;
  /// t ↦ h⁻¹ A(t) h.
  MatrixPath conjugated(const Matrix& h) const;

 private:
  std::vector<Segment> segments_;
  std::vector<std::vector<Matrix>> samples_;
  int dim_ = 0;
};

struct TransportSeries {
  /// terms[k] is the k-fold iterated integral; terms[0] = I.
  std::vector<Matrix> terms;
  int n_max = 0;
  /// ∫ ‖A(s)‖_op ds by the same quadrature.
  double R = 0.0;
  /// Σ_{k > n_max} R^k / k!.
  double remainder = 0.0;
  /// Richardson estimate of the quadrature error from the half grid; NaN
  /// when some segment has an odd interval count.
  double quadrature_error = 0.0;

  Matrix sum() const;
};

/// Σ_{k > n_max} R^k / k!, summed directly.
double remainder_bound(double R, int n_max);
double remainder_bound(const TransportSeries& series);

/// Iterated integrals by repeated trapezoid application of T(φ)(t) = ∫₀ᵗ A φ.
TransportSeries picard_transport(const MatrixPath& path, int n_max,
                                 Convention convention = Convention::Forward);
TransportSeries picard_transport(const Sampler& a, int n_max, int intervals,
                                 Convention convention = Convention::Forward);

/// Classical RK4 for dR/dt = ±A R, R(0) = I, on the path's grid.
Matrix rk4_transport(const MatrixPath& path, Convention convention = Convention::Forward);

/// ‖T(Φ)(1) − Φ(1)‖_op for the partial-sum flow Φ of the series.
double fixed_point_defect(const MatrixPath& path, int n_max,
                          Convention convention = Convention::Forward);

/// Per-generator 𝔤-valued constants: the integral of the 1-form over each letter arc.
using Perturbation = std::map<int, Matrix>;

struct PerturbedHolonomy {
  Matrix flat;  // hol(w)
  TransportSeries series;
  Matrix value;  // hol(w) · Σ terms
};

/// B(t) = U(t)⁻¹ θ(t) U(t) along the letter arcs of w, where U is the flat
/// transport from the start; `intervals` is per letter arc.
MatrixPath transported_perturbation(const surface::Representation& rho, const surface::Word& w,
                                    const Perturbation& theta, int intervals);

/// Holonomy of ∇₀ + θ around w as hol(w) times the series of B.
PerturbedHolonomy perturbed_holonomy(const surface::Representation& rho, const surface::Word& w,
                                     const Perturbation& theta, int n_max = 12,
                                     int intervals = 2000);

/// The same holonomy integrated directly with RK4 across letter arcs.
Matrix perturbed_holonomy_rk4(const surface::Representation& rho, const surface::Word& w,
                              const Perturbation& theta, int intervals = 2000);

}  // namespace looplie::chen
